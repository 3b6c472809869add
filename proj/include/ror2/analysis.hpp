#pragma once

#include <functional>
#include <memory>

#include "ror2/resolution.hpp"

namespace ror2 {

// Unsatisfiable, and removing any single clause occurrence yields a
// satisfiable formula (satisfiability is monotone under clause removal).
inline bool is_minimal_unsat(const Formula& f) {
  if (detail::satisfiable(f)) return false;
  for (auto& o : f.occurrences())
    if (!detail::satisfiable(f.without(o.id))) return false;
  return true;
}

struct MuClass {
  bool is_mu = false;
  int k = 0;  // deficiency, meaningful when is_mu

  friend bool operator==(const MuClass& a, const MuClass& b) {
    return a.is_mu == b.is_mu && (!a.is_mu || a.k == b.k);
  }
};

inline MuClass mu_class(const Formula& f) {
  if (!is_minimal_unsat(f)) return {};
  return {true, deficiency(f)};
}

// Unit-clause structure of a minimal unsatisfiable 2CNF formula: a chain
// between two unit clauses, or a one-unit stem that branches to a
// complementary pair.  Literal overlaps outside the stated patterns are a
// checked error.
struct UnitShape {
  enum Kind { no_unit, two_unit_chain, one_unit_y } kind = no_unit;
  std::vector<int> chain;             // two_unit_chain: unit, middles..., unit
  std::vector<int> stem;              // one_unit_y: unit, chain up to (.. v K)
  std::vector<int> branch1, branch2;  // from ~K to R, and to ~R
  Lit k_lit{1}, r_lit{1};
};

namespace detail {

inline UnitShape unit_shape_impl(const Formula& f) {
  std::vector<int> unit_ids;
  for (auto& o : f.occurrences())
    if (o.clause.unit()) unit_ids.push_back(o.id);
  if (unit_ids.empty()) return UnitShape{};

  std::vector<Formula::Occ> twos;
  for (auto& o : f.occurrences())
    if (o.clause.size() == 2) twos.push_back(o);
  std::vector<char> used(twos.size(), 0);
  auto continuations = [&](Lit cur) {
    std::vector<size_t> out;
    for (size_t i = 0; i < twos.size(); ++i)
      if (!used[i] && twos[i].clause.contains(~cur)) out.push_back(i);
    return out;
  };
  auto other_lit = [&](const Clause& c, Lit l) {
    return c[0] == l ? c[1] : c[0];
  };

  if (unit_ids.size() == 2) {
    Lit l = f.clause(unit_ids[0])[0];
    Lit k = f.clause(unit_ids[1])[0];
    if (k.var() == l.var() && k != ~l)
      throw error(errc::pattern_mismatch, "duplicate unit clause");
    UnitShape sh;
    sh.kind = UnitShape::two_unit_chain;
    sh.chain.push_back(unit_ids[0]);
    std::vector<int> seen_vars{l.var()};
    Lit cur = l;
    while (cur != ~k) {
      auto next = continuations(cur);
      if (next.size() != 1)
        throw error(errc::pattern_mismatch, "two-unit chain does not continue uniquely");
      used[next[0]] = 1;
      sh.chain.push_back(twos[next[0]].id);
      cur = other_lit(twos[next[0]].clause, ~cur);
      for (int v : seen_vars)
        if (v == cur.var() && cur != ~k)
          throw error(errc::pattern_mismatch, "chain literals not pairwise distinct");
      if (cur != ~k) seen_vars.push_back(cur.var());
    }
    sh.chain.push_back(unit_ids[1]);
    for (size_t i = 0; i < used.size(); ++i)
      if (!used[i]) throw error(errc::pattern_mismatch, "clause outside the chain");
    return sh;
  }

  if (unit_ids.size() != 1)
    throw error(errc::pattern_mismatch, "more than two unit clauses");

  // One unit: stem from L to the branch literal K, then two chains from ~K
  // to a complementary pair R / ~R.  Locally the two branches form a single
  // cycle through R, so walk the cycle once and scan for a boundary that
  // keeps the pattern literals pairwise distinct.
  UnitShape sh;
  sh.kind = UnitShape::one_unit_y;
  Lit l = f.clause(unit_ids[0])[0];
  sh.stem.push_back(unit_ids[0]);
  std::vector<int> stem_vars{l.var()};
  Lit cur = l;
  while (true) {
    auto next = continuations(cur);
    if (next.size() == 2) break;  // cur is K
    if (next.size() != 1)
      throw error(errc::pattern_mismatch, "stem does not continue uniquely");
    used[next[0]] = 1;
    sh.stem.push_back(twos[next[0]].id);
    cur = other_lit(twos[next[0]].clause, ~cur);
    for (int v : stem_vars)
      if (v == cur.var())
        throw error(errc::pattern_mismatch, "stem literals not pairwise distinct");
    stem_vars.push_back(cur.var());
  }
  if (sh.stem.size() < 2)
    throw error(errc::pattern_mismatch, "branch point coincides with the unit clause");
  sh.k_lit = cur;

  std::vector<int> cycle_ids;
  std::vector<Lit> pos;  // literal after each cycle clause; last is ~K
  Lit w = cur;
  while (true) {
    auto next = continuations(w);
    if (next.empty()) break;
    if (next.size() > 1 && w != cur)
      throw error(errc::pattern_mismatch, "branch does not continue uniquely");
    used[next[0]] = 1;
    cycle_ids.push_back(twos[next[0]].id);
    w = other_lit(twos[next[0]].clause, ~w);
    pos.push_back(w);
  }
  for (size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw error(errc::pattern_mismatch, "clause outside the pattern");
  size_t len = cycle_ids.size();
  if (len < 2 || pos.back() != ~cur)
    throw error(errc::pattern_mismatch, "branches do not return to the branch literal");
  // Interior cycle literals must be pairwise distinct and disjoint from the
  // stem; any boundary then yields complementary branch ends.
  std::vector<int> all = stem_vars;
  for (size_t i = 0; i + 1 < len; ++i) all.push_back(pos[i].var());
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i + 1 < all.size(); ++i)
    if (all[i] == all[i + 1])
      throw error(errc::pattern_mismatch, "pattern literals not pairwise distinct");
  sh.branch1.assign(cycle_ids.begin(), cycle_ids.begin() + 1);
  sh.branch2.assign(cycle_ids.rbegin(), cycle_ids.rend() - 1);
  sh.r_lit = pos[0];
  return sh;
}

}  // namespace detail

inline UnitShape unit_shape(const Formula& f) {
  if (!is_minimal_unsat(f))
    throw error(errc::precondition_violated, "unit_shape requires a minimal unsatisfiable formula");
  return detail::unit_shape_impl(f);
}

// One branch of a splitting: the side formula (occurrence ids inherited from
// the parent) plus the ids whose clauses lost the split literal.
struct SplitSide {
  Formula formula;
  std::vector<int> stripped_ids;
};

struct SplitPair {
  int var = 0;
  SplitSide pos;  // F_x
  SplitSide neg;  // F_~x
  std::vector<int> shared;  // sigma occurrence ids used by both sides
  bool disjunctive() const { return shared.empty(); }
};

namespace detail {

inline Clause strip(const Clause& c, Lit l) {
  std::vector<Lit> rest;
  for (int i = 0; i < c.size(); ++i)
    if (c[i] != l) rest.push_back(c[i]);
  return make_clause(rest);
}

// Candidate side for the split of f over `keep`: clauses containing `keep`
// stripped, clauses containing ~keep dropped, sigma clauses unchanged.
inline std::pair<std::vector<Formula::Occ>, std::vector<int>> side_candidate(
    const Formula& f, Lit keep) {
  std::vector<Formula::Occ> occs;
  std::vector<int> stripped;
  for (auto& o : f.occurrences()) {
    if (o.clause.contains(keep)) {
      occs.push_back({o.id, strip(o.clause, keep)});
      stripped.push_back(o.id);
    } else if (!o.clause.contains(~keep)) {
      occs.push_back(o);
    }
  }
  return {occs, stripped};
}

inline std::optional<SplitSide> reduce_side(const Formula& f, Lit keep) {
  auto [occs, stripped] = side_candidate(f, keep);
  Formula cand = Formula::from_occurrences(std::move(occs));
  if (satisfiable(cand)) return std::nullopt;
  // Greedy removal in ascending occurrence-id order; afterwards every
  // remaining clause is critical.
  for (int id : cand.ids()) {
    Formula next = cand.without(id);
    if (!satisfiable(next)) cand = std::move(next);
  }
  std::vector<int> kept_stripped;
  for (int id : stripped)
    if (cand.has_id(id)) kept_stripped.push_back(id);
  return SplitSide{std::move(cand), std::move(kept_stripped)};
}

inline std::optional<SplitPair> split_over_unchecked(const Formula& f, int x) {
  auto pos = reduce_side(f, pos_lit(x));
  if (!pos) return std::nullopt;
  auto neg = reduce_side(f, neg_lit(x));
  if (!neg) return std::nullopt;
  SplitPair sp{x, std::move(*pos), std::move(*neg), {}};
  for (auto& o : sp.pos.formula.occurrences()) {
    if (o.clause.contains_var(x)) continue;
    bool strip_pos = std::find(sp.pos.stripped_ids.begin(), sp.pos.stripped_ids.end(),
                               o.id) != sp.pos.stripped_ids.end();
    if (!strip_pos && sp.neg.formula.has_id(o.id)) sp.shared.push_back(o.id);
  }
  return sp;
}

}  // namespace detail

// Splitting of a minimal unsatisfiable formula over x: each side is the
// stripped candidate reduced to a minimal unsatisfiable subset.  Both sides
// land in MU(1).
inline std::optional<SplitPair> split_over(const Formula& f, int x) {
  if (!is_minimal_unsat(f))
    throw error(errc::precondition_violated, "split_over requires a minimal unsatisfiable formula");
  if (f.nvars() <= 1)
    throw error(errc::precondition_violated, "single variable; leaf");
  bool has_pos = false, has_neg = false;
  for (auto& o : f.occurrences()) {
    has_pos = has_pos || o.clause.contains(pos_lit(x));
    has_neg = has_neg || o.clause.contains(neg_lit(x));
  }
  if (!has_pos || !has_neg)
    throw error(errc::precondition_violated,
                "variable " + std::to_string(x) + " does not occur in both polarities");
  return detail::split_over_unchecked(f, x);
}

// F_x^x: clauses that lost the split literal regain it; sigma clauses and
// occurrence ids unchanged.
inline Formula reconstruct(const SplitSide& side, Lit l) {
  std::vector<Formula::Occ> occs;
  for (auto& o : side.formula.occurrences()) {
    bool stripped = std::find(side.stripped_ids.begin(), side.stripped_ids.end(),
                              o.id) != side.stripped_ids.end();
    if (!stripped) {
      occs.push_back(o);
      continue;
    }
    auto lits = o.clause.lits();
    lits.push_back(l);
    occs.push_back({o.id, make_clause(lits)});
  }
  for (int id : side.stripped_ids)
    if (!side.formula.has_id(id))
      throw error(errc::provenance_lost, "stripped id " + std::to_string(id));
  return Formula::from_occurrences(std::move(occs));
}

struct SplitTree {
  struct Node {
    Formula formula;
    int var = 0;  // split variable; 0 at leaves
    std::unique_ptr<Node> pos, neg;
    bool leaf() const { return !pos; }
  };
  std::unique_ptr<Node> root;

  int depth() const { return depth_of(root.get()); }
  static int depth_of(const Node* n) {
    if (!n || n->leaf()) return 0;
    return 1 + std::max(depth_of(n->pos.get()), depth_of(n->neg.get()));
  }
};

namespace detail {

inline std::unique_ptr<SplitTree::Node> split_tree_build(const Formula& f) {
  auto node = std::make_unique<SplitTree::Node>();
  node->formula = f;
  if (f.nvars() <= 1) return node;
  for (int x : f.vars()) {
    auto sp = split_over_unchecked(f, x);
    if (!sp || !sp->disjunctive()) continue;
    auto pos = split_tree_build(sp->pos.formula);
    auto neg = split_tree_build(sp->neg.formula);
    if (!pos || !neg) continue;  // cannot happen for MU(1) sides
    node->var = x;
    node->pos = std::move(pos);
    node->neg = std::move(neg);
    return node;
  }
  return nullptr;
}

}  // namespace detail

// Complete disjunctive splitting tree: leaves hold at most one variable.
// Scans variables in ascending order; once one disjunctive split exists the
// recursion always completes.
inline std::optional<SplitTree> split_tree(const Formula& f) {
  if (!is_minimal_unsat(f))
    throw error(errc::precondition_violated, "split_tree requires a minimal unsatisfiable formula");
  auto root = detail::split_tree_build(f);
  if (!root) return std::nullopt;
  return SplitTree{std::move(root)};
}

namespace detail {

struct FastSplit {
  SplitSide pos, neg;
};

// Variable-disjunctive splitting of an MU formula over x without any
// satisfiability calls: after removing x, every component of the variable
// graph must be touched by stripped literals of exactly one polarity.  The
// sides then follow the components and are minimal unsatisfiable as built.
inline std::optional<FastSplit> fast_var_disjoint_split(const Formula& f, int x) {
  std::vector<Formula::Occ> pos_occ, neg_occ, sigma;
  for (auto& o : f.occurrences()) {
    if (o.clause.contains(pos_lit(x))) pos_occ.push_back(o);
    else if (o.clause.contains(neg_lit(x))) neg_occ.push_back(o);
    else sigma.push_back(o);
  }
  if (pos_occ.empty() || neg_occ.empty()) return std::nullopt;

  auto strip_side = [&](std::vector<Formula::Occ> occ, Lit keep) {
    std::vector<int> stripped;
    for (auto& o : occ) {
      o.clause = strip(o.clause, keep);
      stripped.push_back(o.id);
    }
    return std::pair{occ, stripped};
  };

  // A unit clause (x) strips to the empty clause; the other side then takes
  // every remaining clause and is minimal unsatisfiable outright.
  auto unit_case = [&](std::vector<Formula::Occ>& units, Lit ulit,
                       std::vector<Formula::Occ>& rest, Lit rlit) -> FastSplit {
    auto [uocc, ustripped] = strip_side(units, ulit);
    auto [rocc, rstripped] = strip_side(rest, rlit);
    for (auto& s : sigma) rocc.push_back(s);
    std::sort(rocc.begin(), rocc.end(),
              [](auto& a, auto& b) { return a.id < b.id; });
    return FastSplit{SplitSide{Formula::from_occurrences(uocc), ustripped},
                     SplitSide{Formula::from_occurrences(rocc), rstripped}};
  };
  if (pos_occ.size() == 1 && pos_occ[0].clause.unit()) {
    auto fs = unit_case(pos_occ, pos_lit(x), neg_occ, neg_lit(x));
    return fs;
  }
  if (neg_occ.size() == 1 && neg_occ[0].clause.unit()) {
    auto fs = unit_case(neg_occ, neg_lit(x), pos_occ, pos_lit(x));
    return FastSplit{std::move(fs.neg), std::move(fs.pos)};
  }

  // Union-find over variables != x, edges from sigma clauses.
  std::vector<int> vars = f.vars();
  auto idx = [&](int v) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };
  std::vector<int> parent(vars.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (auto& s : sigma)
    if (s.clause.size() == 2)
      parent[find(idx(s.clause[0].var()))] = find(idx(s.clause[1].var()));

  // 0 untouched, 1 pos, 2 neg, 3 conflict
  std::vector<int> mark(vars.size(), 0);
  auto touch = [&](int var, int m) {
    int r = find(idx(var));
    mark[r] |= m;
  };
  for (auto& o : pos_occ) touch(strip(o.clause, pos_lit(x))[0].var(), 1);
  for (auto& o : neg_occ) touch(strip(o.clause, neg_lit(x))[0].var(), 2);
  for (int v : vars) {
    if (v == x) continue;
    int m = mark[find(idx(v))];
    if (m == 0 || m == 3) return std::nullopt;
  }

  auto side_of_var = [&](int v) { return mark[find(idx(v))]; };
  auto [pocc, pstripped] = strip_side(pos_occ, pos_lit(x));
  auto [nocc, nstripped] = strip_side(neg_occ, neg_lit(x));
  for (auto& s : sigma) {
    if (side_of_var(s.clause[0].var()) == 1) pocc.push_back(s);
    else nocc.push_back(s);
  }
  auto by_id = [](auto& a, auto& b) { return a.id < b.id; };
  std::sort(pocc.begin(), pocc.end(), by_id);
  std::sort(nocc.begin(), nocc.end(), by_id);
  return FastSplit{SplitSide{Formula::from_occurrences(pocc), pstripped},
                   SplitSide{Formula::from_occurrences(nocc), nstripped}};
}

// Refutation of an MU(1) formula by recursive variable-disjunctive splitting.
// Each side's refutation replays against the parent clauses, which restores
// the split literal, turning it into a derivation of (x) or (~x).
inline Derivation mu1_refutation(const Formula& f) {
  if (f.nvars() == 1) {
    auto& occs = f.occurrences();
    assert(occs.size() == 2);
    Derivation d;
    d.steps.push_back(make_step(Ref::in(occs[0].id), occs[0].clause,
                                Ref::in(occs[1].id), occs[1].clause,
                                occs[0].clause[0].var()));
    d.conclusion = Ref::at(0);
    return d;
  }
  for (int x : f.vars()) {
    auto fs = fast_var_disjoint_split(f, x);
    if (!fs) continue;
    auto lift = [&](const SplitSide& side, Lit unit) -> Derivation {
      if (side.formula.size() == 1 && side.formula.occurrences()[0].clause.empty()) {
        Derivation d;
        d.conclusion = Ref::in(side.formula.occurrences()[0].id);
        return d;
      }
      Derivation sub = mu1_refutation(side.formula);
      Derivation lifted = replay(sub, [&](int id) { return f.clause(id); });
      assert(deref(f, lifted, lifted.conclusion) ==
             make_clause(std::vector<Lit>{unit}));
      (void)unit;
      return lifted;
    };
    Derivation dp = lift(fs->pos, pos_lit(x));
    Derivation dn = lift(fs->neg, neg_lit(x));
    Derivation d;
    Ref rp = append_derivation(d, dp);
    Ref rn = append_derivation(d, dn);
    d.steps.push_back(make_step(rp, deref(f, d, rp), rn, deref(f, d, rn), x));
    d.conclusion = Ref::at(static_cast<int>(d.steps.size()) - 1);
    return d;
  }
  throw std::logic_error("MU(1) formula without a variable-disjunctive splitting");
}

}  // namespace detail

// Var-ROR refutation of an MU(1) formula, polynomial time: recursive
// variable-disjunctive splitting, final step resolves (x) with (~x).
// The result also passes the read-once check.
inline Refutation mu1_var_ror(const Formula& f) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "mu1_var_ror");
  MuClass mc = mu_class(f);
  if (!mc.is_mu || mc.k != 1)
    throw error(errc::precondition_violated, "mu1_var_ror requires an MU(1) formula");
  return detail::mu1_refutation(f);
}

namespace detail {

// Read-once refutation of an MU formula with a unit clause, following its
// unit shape.
inline Refutation mu_unit_refutation(const Formula& f, const UnitShape& sh) {
  Derivation d;
  auto fold_units = [&](const std::vector<int>& ids) -> std::pair<Ref, Clause> {
    // ids = unit, middles...: folds to the unit implied at the end
    Ref acc_ref = Ref::in(ids[0]);
    Clause acc = f.clause(ids[0]);
    for (size_t i = 1; i < ids.size(); ++i) {
      const Clause& c = f.clause(ids[i]);
      d.steps.push_back(make_step(acc_ref, acc, Ref::in(ids[i]), c, acc[0].var()));
      acc = d.steps.back().resolvent;
      acc_ref = Ref::at(static_cast<int>(d.steps.size()) - 1);
    }
    return {acc_ref, acc};
  };

  if (sh.kind == UnitShape::two_unit_chain) {
    std::vector<int> front(sh.chain.begin(), sh.chain.end() - 1);
    auto [aref, acc] = fold_units(front);
    int last = sh.chain.back();
    d.steps.push_back(make_step(aref, acc, Ref::in(last), f.clause(last), acc[0].var()));
    d.conclusion = Ref::at(static_cast<int>(d.steps.size()) - 1);
    return d;
  }

  assert(sh.kind == UnitShape::one_unit_y);
  auto fold_branch = [&](const std::vector<int>& ids) -> std::pair<Ref, Clause> {
    Ref acc_ref = Ref::in(ids[0]);
    Clause acc = f.clause(ids[0]);
    Lit cur = acc[0] == ~sh.k_lit ? acc[1] : acc[0];
    for (size_t i = 1; i < ids.size(); ++i) {
      const Clause& c = f.clause(ids[i]);
      d.steps.push_back(make_step(acc_ref, acc, Ref::in(ids[i]), c, cur.var()));
      acc = d.steps.back().resolvent;
      acc_ref = Ref::at(static_cast<int>(d.steps.size()) - 1);
      cur = acc[0] == ~sh.k_lit ? acc[1] : acc[0];
    }
    return {acc_ref, acc};
  };
  auto [b1ref, b1] = fold_branch(sh.branch1);  // (~K v R)
  auto [b2ref, b2] = fold_branch(sh.branch2);  // (~K v ~R)
  d.steps.push_back(make_step(b1ref, b1, b2ref, b2, sh.r_lit.var()));
  Ref notk = Ref::at(static_cast<int>(d.steps.size()) - 1);  // (~K)
  auto [sref, sacc] = fold_units(sh.stem);                   // (K)
  d.steps.push_back(make_step(sref, sacc, notk, deref(f, d, notk), sh.k_lit.var()));
  d.conclusion = Ref::at(static_cast<int>(d.steps.size()) - 1);
  return d;
}

}  // namespace detail

// Read-once refutation of a minimal unsatisfiable formula with at least one
// unit clause (such formulas are MU(1)): fold the chain against the second
// unit, or derive (~K) from the two branches and fold the stem.
inline Refutation mu_unit_ror(const Formula& f) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "mu_unit_ror");
  if (!is_minimal_unsat(f))
    throw error(errc::precondition_violated, "mu_unit_ror requires a minimal unsatisfiable formula");
  UnitShape sh = detail::unit_shape_impl(f);
  if (sh.kind == UnitShape::no_unit)
    throw error(errc::precondition_violated, "mu_unit_ror requires a unit clause");
  return detail::mu_unit_refutation(f, sh);
}

}  // namespace ror2
