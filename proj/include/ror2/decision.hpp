#pragma once

#include <unordered_map>
#include <unordered_set>

#include "ror2/analysis.hpp"

namespace ror2 {

struct SearchBudget {
  std::uint64_t max_states = 1'000'000;
  bool deterministic = true;  // exploration is always deterministic here
};

struct Verdict {
  enum Kind { yes, no, inconclusive } kind = no;
  std::optional<Refutation> certificate;  // present iff yes
  std::uint64_t states = 0;

  static Verdict Yes(Refutation r, std::uint64_t s) { return {yes, std::move(r), s}; }
  static Verdict No(std::uint64_t s) { return {no, std::nullopt, s}; }
  static Verdict Maybe(std::uint64_t s) { return {inconclusive, std::nullopt, s}; }
};

namespace detail {

struct BudgetCounter {
  std::uint64_t used = 0;
  std::uint64_t limit;
  explicit BudgetCounter(std::uint64_t l) : limit(l) {}
  // false once exhausted
  bool tick(std::uint64_t n = 1) {
    used += n;
    return used <= limit;
  }
  bool exhausted() const { return used > limit; }
};

inline void assert_certificate(const Formula& f, const Refutation& r,
                               CheckMode mode, const char* who) {
  CheckReport rep = check(f, r, mode);
  if (!rep.valid)
    throw std::logic_error(std::string(who) + " produced an invalid certificate: " +
                           (rep.violations.empty() ? "?" : rep.violations[0].second));
}

// ---- satisfiability of clause subsets, with a bitmask fast path ----------

// For formulas over at most 6 variables a clause is a 64-bit mask of its
// satisfying assignments; a subset is satisfiable iff the AND is nonzero.
struct SubsetSat {
  const Formula& f;
  std::vector<int> vars;
  bool small;
  std::vector<std::uint64_t> masks;  // by occurrence position

  explicit SubsetSat(const Formula& fla) : f(fla), vars(fla.vars()) {
    small = vars.size() <= 6;
    if (!small) return;
    int n = static_cast<int>(vars.size());
    int total = 1 << n;
    auto vidx = [&](int v) {
      return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    };
    for (auto& o : f.occurrences()) {
      std::uint64_t m = 0;
      for (int a = 0; a < total; ++a) {
        bool sat = false;
        for (int i = 0; i < o.clause.size(); ++i) {
          Lit l = o.clause[i];
          bool val = (a >> vidx(l.var())) & 1;
          if (val == l.positive()) sat = true;
        }
        if (sat) m |= (1ull << a);
      }
      masks.push_back(m);
    }
  }

  std::uint64_t full_mask() const {
    int n = static_cast<int>(vars.size());
    return n >= 6 ? ~0ull : ((1ull << (1 << n)) - 1);
  }
};

// ---- MU(1) subformula search (variable read-once decision) ---------------

struct Mu1Search {
  const Formula& f;
  SubsetSat sat;
  BudgetCounter& budget;
  std::vector<int> ids;                       // occurrence ids by position
  std::vector<std::vector<int>> var_clauses;  // var index -> positions
  std::vector<int> found;                     // witness positions
  int max_size;

  Mu1Search(const Formula& fla, BudgetCounter& b)
      : f(fla), sat(fla), budget(b) {
    ids = f.ids();
    max_size = f.nvars() + 1;  // an MU(1) formula has nvars+1 clauses
    var_clauses.resize(sat.vars.size());
    for (int p = 0; p < f.size(); ++p) {
      const Clause& c = f.clause(ids[p]);
      for (int i = 0; i < c.size(); ++i) {
        int vi = static_cast<int>(std::lower_bound(sat.vars.begin(), sat.vars.end(),
                                                   c[i].var()) - sat.vars.begin());
        var_clauses[vi].push_back(p);
      }
    }
  }

  bool subset_sat(const std::vector<int>& positions) const {
    if (sat.small) {
      std::uint64_t m = sat.full_mask();
      for (int p : positions) m &= sat.masks[p];
      return m != 0;
    }
    std::vector<int> sel;
    for (int p : positions) sel.push_back(ids[p]);
    return satisfiable(f.subformula(sel));
  }

  bool is_mu1(const std::vector<int>& positions) const {
    // positions are unsat already; check deficiency 1 and minimality
    std::vector<int> vs;
    for (int p : positions) {
      const Clause& c = f.clause(ids[p]);
      for (int i = 0; i < c.size(); ++i) vs.push_back(c[i].var());
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (positions.size() != vs.size() + 1) return false;
    for (size_t skip = 0; skip < positions.size(); ++skip) {
      std::vector<int> rest;
      for (size_t i = 0; i < positions.size(); ++i)
        if (i != skip) rest.push_back(positions[i]);
      if (!subset_sat(rest)) return false;
    }
    return true;
  }

  // Enumerates connected clause subsets (MU formulas are connected in the
  // variable graph), growing only satisfiable subsets; a subset that just
  // became unsatisfiable is tested for MU(1) and never extended.
  bool grow(std::vector<int>& chosen, std::vector<int> frontier,
            std::vector<char>& banned) {
    if (!budget.tick()) return false;
    while (!frontier.empty()) {
      int c = frontier.front();
      frontier.erase(frontier.begin());
      chosen.push_back(c);
      bool unsat = !subset_sat(chosen);
      if (unsat) {
        if (is_mu1(chosen)) {
          found = chosen;
          return true;
        }
      } else if (static_cast<int>(chosen.size()) < max_size) {
        std::vector<int> next = frontier;
        const Clause& cc = f.clause(ids[c]);
        for (int i = 0; i < cc.size(); ++i) {
          int vi = static_cast<int>(std::lower_bound(sat.vars.begin(), sat.vars.end(),
                                                     cc[i].var()) - sat.vars.begin());
          for (int p : var_clauses[vi]) {
            if (banned[p]) continue;
            if (std::find(chosen.begin(), chosen.end(), p) != chosen.end()) continue;
            if (std::find(next.begin(), next.end(), p) != next.end()) continue;
            next.push_back(p);
          }
        }
        std::sort(next.begin(), next.end());
        std::vector<char> saved = banned;
        if (grow(chosen, std::move(next), banned)) return true;
        if (budget.exhausted()) return false;
        banned = std::move(saved);
      }
      chosen.pop_back();
      banned[c] = 1;
      if (budget.exhausted()) return false;
    }
    return false;
  }

  // true if a witness was found; false means exhausted or out of budget
  bool run() {
    std::vector<char> banned(f.size(), 0);
    for (int anchor = 0; anchor < f.size(); ++anchor) {
      if (banned[anchor]) continue;
      std::vector<int> chosen;
      std::vector<char> local = banned;
      std::vector<int> start{anchor};
      if (grow(chosen, start, local)) return true;
      if (budget.exhausted()) return false;
      banned[anchor] = 1;
    }
    return false;
  }
};

}  // namespace detail

// Variable read-once decision: a 2CNF formula has a Var-ROR refutation iff
// it contains an MU(1) subformula.  Branch-and-bound over connected clause
// subsets, pruning satisfiable-by-monotonicity growth and the deficiency
// bound; No is returned only after exhaustive search.
inline Verdict decide_var_ror(const Formula& f, SearchBudget b = {}) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "decide_var_ror");
  detail::BudgetCounter budget(b.max_states);
  budget.tick();
  if (detail::satisfiable(f)) return Verdict::No(budget.used);

  // Fast path: the destructive core is often already MU(1).
  Formula core = f;
  for (int id : f.ids()) {
    Formula next = core.without(id);
    if (!detail::satisfiable(next)) core = std::move(next);
  }
  if (deficiency(core) == 1) {
    Refutation r = mu1_var_ror(core);
    detail::assert_certificate(f, r, CheckMode::vo(), "decide_var_ror");
    return Verdict::Yes(std::move(r), budget.used);
  }

  detail::Mu1Search search(f, budget);
  if (search.run()) {
    std::vector<int> sel;
    for (int p : search.found) sel.push_back(search.ids[p]);
    Refutation r = mu1_var_ror(f.subformula(sel));
    detail::assert_certificate(f, r, CheckMode::vo(), "decide_var_ror");
    return Verdict::Yes(std::move(r), budget.used);
  }
  if (budget.exhausted()) return Verdict::Maybe(budget.used);
  return Verdict::No(budget.used);
}

namespace detail {

// Read-once decision search: a witness is a variable x plus a pair of
// implication paths ~x -> x and x -> ~x over disjoint clause occurrence
// sets.  P1 ranges over vertex-simple paths; the complement side only needs
// reachability (the read-once repair produces the derivation).
struct RorSearch {
  const Formula& f;
  const ImplicationGraph g;
  BudgetCounter& budget;

  RorSearch(const Formula& fla, BudgetCounter& b)
      : f(fla), g(build_graph(fla)), budget(b) {}

  // reachability from `from` to `to` avoiding a set of clause ids
  bool reach_avoiding(int from, int to, const std::set<int>& avoid) const {
    if (from == to) return true;
    std::vector<char> seen(g.nvertices(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto& e : g.out(v)) {
        if (avoid.count(e.clause_id) || seen[e.to]) continue;
        if (e.to == to) return true;
        seen[e.to] = 1;
        stack.push_back(e.to);
      }
    }
    return false;
  }

  std::optional<std::set<int>> witness;  // clauses of P1
  int witness_var = 0;

  // DFS over vertex-simple paths src..dst; at each completed path, test the
  // complement side.  Only vertices that reach dst are entered.
  bool dfs(int v, int dst, int back_src, int back_dst, std::vector<char>& onpath,
           std::vector<int>& path_clauses, const std::vector<char>& useful) {
    if (!budget.tick()) return false;
    if (v == dst) {
      std::set<int> used(path_clauses.begin(), path_clauses.end());
      if (reach_avoiding(back_src, back_dst, used)) {
        witness = std::move(used);
        return true;
      }
      return false;
    }
    for (auto& e : g.out(v)) {
      if (onpath[e.to] || !useful[e.to]) continue;
      onpath[e.to] = 1;
      path_clauses.push_back(e.clause_id);
      if (dfs(e.to, dst, back_src, back_dst, onpath, path_clauses, useful))
        return true;
      path_clauses.pop_back();
      onpath[e.to] = 0;
      if (budget.exhausted()) return false;
    }
    return false;
  }

  bool run_for(int x) {
    auto vp = g.vertex(pos_lit(x));
    if (!vp) return false;
    int p = *vp, n = ImplicationGraph::mirror(*vp);
    // vertices from which the forward target is reachable
    std::vector<char> useful(g.nvertices(), 0);
    for (int v = 0; v < g.nvertices(); ++v)
      useful[v] = reachable(g, v, p) ? 1 : 0;
    if (!useful[n] || !reachable(g, p, n)) return false;
    std::vector<char> onpath(g.nvertices(), 0);
    onpath[n] = 1;
    onpath[p] = 0;
    std::vector<int> path_clauses;
    if (dfs(n, p, p, n, onpath, path_clauses, useful)) {
      witness_var = x;
      return true;
    }
    return false;
  }
};

// Certificate assembly for a read-once witness: each side derives its unit
// within its own occurrence set, then the units resolve.
inline Refutation ror_certificate(const Formula& f, int x,
                                  const std::set<int>& side1) {
  std::vector<int> s1(side1.begin(), side1.end());
  std::vector<int> s2;
  for (int id : f.ids())
    if (!side1.count(id)) s2.push_back(id);
  Derivation d1 = derive_unit_read_once(f.subformula(s1), pos_lit(x));
  Derivation d2 = derive_unit_read_once(f.subformula(s2), neg_lit(x));
  Refutation r;
  Ref c1 = append_derivation(r, d1);
  Ref c2 = append_derivation(r, d2);
  r.steps.push_back(detail::make_step(c1, detail::deref(f, r, c1), c2,
                                      detail::deref(f, r, c2), x));
  r.conclusion = Ref::at(static_cast<int>(r.steps.size()) - 1);
  return r;
}

}  // namespace detail

// Read-once decision: searches over variables x for clause-disjoint
// derivations of (x) and (~x); certificates assemble the two unit
// derivations and resolve them.  No is sound (full exhaustion).
inline Verdict decide_ror(const Formula& f, SearchBudget b = {}) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "decide_ror");
  detail::BudgetCounter budget(b.max_states);
  budget.tick();
  if (detail::satisfiable(f)) return Verdict::No(budget.used);

  detail::RorSearch search(f, budget);
  // Quick pass: try the breadth-first path per variable before enumerating.
  for (int x : f.vars()) {
    if (!budget.tick()) break;
    auto p1 = find_path(search.g, neg_lit(x), pos_lit(x));
    if (!p1 || p1->edges.empty()) continue;
    std::set<int> used;
    for (auto& e : p1->edges) used.insert(e.clause_id);
    auto vx = search.g.vertex(pos_lit(x));
    if (search.reach_avoiding(*vx, ImplicationGraph::mirror(*vx), used)) {
      Refutation r = detail::ror_certificate(f, x, used);
      detail::assert_certificate(f, r, CheckMode::ro(), "decide_ror");
      return Verdict::Yes(std::move(r), budget.used);
    }
  }
  for (int x : f.vars()) {
    if (search.run_for(x)) {
      Refutation r = detail::ror_certificate(f, x, *search.witness);
      detail::assert_certificate(f, r, CheckMode::ro(), "decide_ror");
      return Verdict::Yes(std::move(r), budget.used);
    }
    if (budget.exhausted()) return Verdict::Maybe(budget.used);
  }
  return Verdict::No(budget.used);
}

// Polynomial read-once decision for minimal unsatisfiable formulas: some
// variable admits a disjunctive splitting iff a read-once refutation
// exists; the splitting over a variable is unique when disjunctive, so the
// computed one settles each variable.  Never inconclusive.
inline Verdict decide_ror_mu(const Formula& f) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "decide_ror_mu");
  if (!is_minimal_unsat(f))
    throw error(errc::precondition_violated, "decide_ror_mu requires a minimal unsatisfiable formula");
  if (f.nvars() == 1) {
    Refutation r = detail::mu1_refutation(f);
    detail::assert_certificate(f, r, CheckMode::ro(), "decide_ror_mu");
    return Verdict::Yes(std::move(r), 1);
  }
  std::uint64_t states = 0;
  for (int x : f.vars()) {
    ++states;
    auto sp = detail::split_over_unchecked(f, x);
    if (!sp || !sp->disjunctive()) continue;
    // Each side is MU(1); refute it and replay against the parent clauses,
    // which restores the stripped literal, then resolve (x) with (~x).
    auto lift = [&](const SplitSide& side) -> Derivation {
      if (side.formula.size() == 1 && side.formula.occurrences()[0].clause.empty()) {
        Derivation d;
        d.conclusion = Ref::in(side.formula.occurrences()[0].id);
        return d;
      }
      Derivation sub = detail::mu1_refutation(side.formula);
      return detail::replay(sub, [&](int id) { return f.clause(id); });
    };
    Derivation dp = lift(sp->pos);
    Derivation dn = lift(sp->neg);
    Refutation r;
    Ref rp = append_derivation(r, dp);
    Ref rn = append_derivation(r, dn);
    r.steps.push_back(detail::make_step(rp, detail::deref(f, r, rp), rn,
                                        detail::deref(f, r, rn), x));
    r.conclusion = Ref::at(static_cast<int>(r.steps.size()) - 1);
    detail::assert_certificate(f, r, CheckMode::ro(), "decide_ror_mu");
    return Verdict::Yes(std::move(r), states);
  }
  return Verdict::No(states);
}

// Copy-2 refutation of an unsatisfiable formula: derive (x) and (~x)
// read-once for the unsat witness x, then resolve; each occurrence serves
// at most once per derivation, so at most twice overall.
inline Refutation copy2_refutation(const Formula& f) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "copy2_refutation");
  SatResult sr = decide_sat(f);
  if (sr.sat())
    throw error(errc::precondition_violated, "copy2_refutation requires an unsatisfiable formula");
  int x = sr.unsat_var;
  Derivation d1 = derive_unit_read_once(f, pos_lit(x));
  Derivation d2 = derive_unit_read_once(f, neg_lit(x));
  Refutation r;
  Ref c1 = append_derivation(r, d1);
  Ref c2 = append_derivation(r, d2);
  r.steps.push_back(detail::make_step(c1, detail::deref(f, r, c1), c2,
                                      detail::deref(f, r, c2), x));
  r.conclusion = Ref::at(static_cast<int>(r.steps.size()) - 1);
  detail::assert_certificate(f, r, CheckMode::copy(2), "copy2_refutation");
  return r;
}

namespace detail {

// Exhaustive oracle over read-once resolution states: a state is the
// multiset of available clauses (premises are consumed, the resolvent joins
// the set).  Failed states are memoized on their canonical form; for the
// var-once variant the used-pivot set joins the key.
struct BruteSearch {
  struct Item {
    Clause clause;
    Ref ref;
  };

  const Formula& f;
  bool var_once;
  BudgetCounter& budget;
  std::vector<int> vars;
  std::unordered_set<std::string> failed;
  std::vector<Step> steps;
  bool found = false;

  BruteSearch(const Formula& fla, bool vo, BudgetCounter& b)
      : f(fla), var_once(vo), budget(b), vars(fla.vars()) {}

  static bool item_less(const Item& a, const Item& b) {
    if (a.clause != b.clause) return a.clause < b.clause;
    if (a.ref.kind != b.ref.kind) return a.ref.kind < b.ref.kind;
    return a.ref.index < b.ref.index;
  }

  std::string key(const std::vector<Item>& avail, const std::vector<int>& pivots) const {
    std::string k;
    for (auto& it : avail) {
      for (int i = 0; i < it.clause.size(); ++i) {
        k += std::to_string(it.clause[i].dimacs());
        k += ',';
      }
      k += ';';
    }
    if (var_once) {
      k += '|';
      for (int p : pivots) {
        k += std::to_string(p);
        k += ',';
      }
    }
    return k;
  }

  bool dfs(std::vector<Item>& avail, std::vector<int>& pivots) {
    if (!budget.tick()) return false;
    std::string k = key(avail, pivots);
    if (failed.count(k)) return false;
    int n = static_cast<int>(avail.size());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int side = 0; side < 2; ++side) {
          const Item& a = side == 0 ? avail[i] : avail[j];
          const Item& bm = side == 0 ? avail[j] : avail[i];
          // candidate pivots: literals positive in a, negative in b
          for (int li = 0; li < a.clause.size(); ++li) {
            Lit l = a.clause[li];
            if (!l.positive()) continue;
            if (!bm.clause.contains(~l)) continue;
            int pivot = l.var();
            if (var_once &&
                std::find(pivots.begin(), pivots.end(), pivot) != pivots.end())
              continue;
            auto res = try_resolve(a.clause, bm.clause, pivot);
            if (!res) continue;
            Step st{a.ref, bm.ref, pivot, *res};
            steps.push_back(st);
            if (res->empty()) {
              found = true;
              return true;
            }
            std::vector<Item> next;
            next.reserve(avail.size() - 1);
            Item nitem{*res, Ref::at(static_cast<int>(steps.size()) - 1)};
            for (int t = 0; t < n; ++t)
              if (t != i && t != j) next.push_back(avail[t]);
            next.insert(std::lower_bound(next.begin(), next.end(), nitem, item_less),
                        nitem);
            pivots.push_back(pivot);
            if (dfs(next, pivots)) return true;
            pivots.pop_back();
            steps.pop_back();
            if (budget.exhausted()) return false;
          }
        }
      }
    }
    failed.insert(std::move(k));
    return false;
  }
};

inline Verdict brute_force_impl(const Formula& f, bool var_once, SearchBudget b) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "brute force oracle");
  BudgetCounter budget(b.max_states);
  BruteSearch search(f, var_once, budget);
  std::vector<BruteSearch::Item> avail;
  for (auto& o : f.occurrences()) avail.push_back({o.clause, Ref::in(o.id)});
  std::sort(avail.begin(), avail.end(), BruteSearch::item_less);
  std::vector<int> pivots;
  if (search.dfs(avail, pivots)) {
    // Steps on the success stack are numbered in creation order, which is
    // exactly their order in `steps`.
    Refutation r;
    r.steps = search.steps;
    r.conclusion = Ref::at(static_cast<int>(r.steps.size()) - 1);
    assert_certificate(f, r, var_once ? CheckMode::vo() : CheckMode::ro(),
                       "brute force oracle");
    return Verdict::Yes(std::move(r), budget.used);
  }
  if (budget.exhausted()) return Verdict::Maybe(budget.used);
  return Verdict::No(budget.used);
}

}  // namespace detail

// Exact oracles for cross-validation on small instances.
inline Verdict brute_force_ror(const Formula& f, SearchBudget b = {}) {
  return detail::brute_force_impl(f, false, b);
}
inline Verdict brute_force_var_ror(const Formula& f, SearchBudget b = {}) {
  return detail::brute_force_impl(f, true, b);
}

}  // namespace ror2
