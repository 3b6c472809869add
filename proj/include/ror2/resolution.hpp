#pragma once

#include <map>
#include <set>
#include <string>

#include "ror2/igraph.hpp"

namespace ror2 {

inline std::optional<Clause> try_resolve(const Clause& c1, const Clause& c2,
                                         int pivot, std::string* why = nullptr) {
  auto l1 = c1.lit_of_var(pivot);
  auto l2 = c2.lit_of_var(pivot);
  if (!l1 || !l2 || *l1 != ~*l2) {
    if (why) *why = "pivot " + std::to_string(pivot) + " not complementary";
    return std::nullopt;
  }
  std::vector<Lit> rest;
  for (int i = 0; i < c1.size(); ++i)
    if (c1[i].var() != pivot) rest.push_back(c1[i]);
  for (int i = 0; i < c2.size(); ++i)
    if (c2[i].var() != pivot) rest.push_back(c2[i]);
  std::sort(rest.begin(), rest.end());
  rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
  if (rest.size() == 2 && rest[0].var() == rest[1].var()) {
    if (why) *why = "resolvent tautological";
    return std::nullopt;
  }
  return make_clause(rest);
}

// (a v x), (~x v b) |- (a v b), with duplicate literals merged.  Tautological
// resolvents are illegal.
inline Clause resolve(const Clause& c1, const Clause& c2, int pivot) {
  auto l1 = c1.lit_of_var(pivot);
  auto l2 = c2.lit_of_var(pivot);
  if (!l1 || !l2 || *l1 != ~*l2)
    throw error(errc::pivot_missing,
                "pivot " + std::to_string(pivot) + " in " + c1.str() + ", " + c2.str());
  std::string why;
  auto r = try_resolve(c1, c2, pivot, &why);
  if (!r) throw error(errc::resolvent_tautological, c1.str() + ", " + c2.str());
  return *r;
}

// Reference to a premise: an input occurrence id, or an earlier step of the
// same derivation (0-based index).
struct Ref {
  enum Kind { input, step } kind = input;
  int index = 0;

  static Ref in(int id) { return Ref{input, id}; }
  static Ref at(int step_index) { return Ref{step, step_index}; }
  friend bool operator==(const Ref& a, const Ref& b) {
    return a.kind == b.kind && a.index == b.index;
  }
};

struct Step {
  Ref left;   // premise containing the pivot positively
  Ref right;  // premise containing the pivot negatively
  int pivot = 0;
  Clause resolvent;
};

// A resolution derivation.  The conclusion is either the last step or, for
// zero-step derivations, an input occurrence.  A Refutation is a derivation
// whose final step resolves to the empty clause.
struct Derivation {
  std::vector<Step> steps;
  Ref conclusion;

  bool trivial() const { return steps.empty(); }
};
using Refutation = Derivation;

// Wire numbering: derived steps are m+1, m+2, ... after the input ids of the
// formula the derivation targets.
inline int wire_id(const Formula& f, Ref r) {
  return r.kind == Ref::input ? r.index : f.max_id() + 1 + r.index;
}

// Appends src's steps to dst, remapping step references; returns src's
// conclusion as a reference valid in dst.
inline Ref append_derivation(Derivation& dst, const Derivation& src) {
  int offset = static_cast<int>(dst.steps.size());
  auto remap = [&](Ref r) {
    return r.kind == Ref::step ? Ref::at(r.index + offset) : r;
  };
  for (auto& s : src.steps)
    dst.steps.push_back({remap(s.left), remap(s.right), s.pivot, s.resolvent});
  return remap(src.conclusion);
}

namespace detail {

// Orients premises so the pivot is positive on the left, and resolves.
inline Step make_step(Ref a, const Clause& ca, Ref b, const Clause& cb,
                      int pivot) {
  auto la = ca.lit_of_var(pivot);
  if (!la)
    throw error(errc::pivot_missing, "pivot " + std::to_string(pivot));
  if (la->positive())
    return Step{a, b, pivot, resolve(ca, cb, pivot)};
  return Step{b, a, pivot, resolve(cb, ca, pivot)};
}

inline const Clause& deref(const Formula& f, const Derivation& d, Ref r) {
  if (r.kind == Ref::input) return f.clause(r.index);
  return d.steps[r.index].resolvent;
}

// Rebuilds a derivation against substituted input clauses (same references,
// same pivots, resolvents recomputed).
template <typename ClauseOfId>
Derivation replay(const Derivation& d, ClauseOfId&& input_clause) {
  Derivation out;
  auto clause_of = [&](Ref r) -> Clause {
    if (r.kind == Ref::input) return input_clause(r.index);
    return out.steps[r.index].resolvent;
  };
  for (auto& s : d.steps) {
    Clause cl = clause_of(s.left);
    Clause cr = clause_of(s.right);
    out.steps.push_back(make_step(s.left, cl, s.right, cr, s.pivot));
  }
  out.conclusion = d.conclusion;
  return out;
}

}  // namespace detail

struct CheckMode {
  enum Kind { unrestricted, read_once, var_once, copy_bound } kind = unrestricted;
  int k = 1;  // bound for copy_bound

  static CheckMode none() { return {unrestricted, 1}; }
  static CheckMode ro() { return {read_once, 1}; }
  static CheckMode vo() { return {var_once, 1}; }
  static CheckMode copy(int k) { return {copy_bound, k}; }
};

struct CheckReport {
  bool valid = true;
  std::map<int, int> usage;         // wire ref -> direct premise uses
  std::map<int, int> pivot_counts;  // variable -> times used as pivot
  std::vector<std::pair<int, std::string>> violations;  // (wire step id, reason)

  void flag(int step_id, const std::string& reason) {
    valid = false;
    violations.push_back({step_id, reason});
  }
};

namespace detail {

inline CheckReport check_impl(const Formula& f, const Derivation& d,
                              CheckMode mode, bool require_refutation) {
  CheckReport rep;
  int base = f.max_id();
  std::vector<char> ok(d.steps.size(), 1);

  auto premise = [&](int si, Ref r, Clause& out) -> bool {
    if (r.kind == Ref::input) {
      if (!f.has_id(r.index)) {
        rep.flag(base + 1 + si, "dangling input reference " + std::to_string(r.index));
        return false;
      }
      out = f.clause(r.index);
      return true;
    }
    if (r.index < 0 || r.index >= si) {
      rep.flag(base + 1 + si, "forward or invalid step reference");
      return false;
    }
    if (!ok[r.index]) return false;
    out = d.steps[r.index].resolvent;
    return true;
  };

  for (size_t si = 0; si < d.steps.size(); ++si) {
    const Step& s = d.steps[si];
    int sid = base + 1 + static_cast<int>(si);
    rep.usage[wire_id(f, s.left)]++;
    rep.usage[wire_id(f, s.right)]++;
    rep.pivot_counts[s.pivot]++;
    Clause cl, cr;
    if (!premise(static_cast<int>(si), s.left, cl) ||
        !premise(static_cast<int>(si), s.right, cr)) {
      ok[si] = 0;
      continue;
    }
    // Accept either orientation; normalize so the pivot is positive in cl.
    auto ll = cl.lit_of_var(s.pivot);
    auto lr = cr.lit_of_var(s.pivot);
    if (!ll || !lr || *ll == *lr) {
      rep.flag(sid, "pivot " + std::to_string(s.pivot) + " not complementary in premises");
      ok[si] = 0;
      continue;
    }
    if (!ll->positive()) std::swap(cl, cr);
    std::string why;
    auto r = try_resolve(cl, cr, s.pivot, &why);
    if (!r) {
      rep.flag(sid, why);
      ok[si] = 0;
      continue;
    }
    if (*r != s.resolvent) {
      rep.flag(sid, "resolvent mismatch: expected " + r->str() + ", stored " +
                        s.resolvent.str());
      ok[si] = 0;
    }
  }

  if (require_refutation) {
    if (d.steps.empty())
      rep.flag(base, "no steps");
    else if (!d.steps.back().resolvent.empty())
      rep.flag(base + static_cast<int>(d.steps.size()),
               "final resolvent is not the empty clause");
  }

  switch (mode.kind) {
    case CheckMode::unrestricted:
      break;
    case CheckMode::read_once:
      // Every premise reference, input occurrence or derived step, at most once.
      for (size_t si = 0; si < d.steps.size(); ++si) {
        for (Ref r : {d.steps[si].left, d.steps[si].right}) {
          int w = wire_id(f, r);
          // flag at the step making the over-use; usage counts are final.
          if (rep.usage[w] > 1) {
            rep.flag(base + 1 + static_cast<int>(si),
                     "reference " + std::to_string(w) + " used " +
                         std::to_string(rep.usage[w]) + " times");
            break;
          }
        }
        if (!rep.valid) break;
      }
      break;
    case CheckMode::var_once:
      for (auto& [var, n] : rep.pivot_counts)
        if (n > 1)
          rep.flag(base + static_cast<int>(d.steps.size()),
                   "variable " + std::to_string(var) + " used as pivot " +
                       std::to_string(n) + " times");
      break;
    case CheckMode::copy_bound: {
      // Tree-unfolding from the final step: reusing a derived clause reuses
      // the input occurrences supporting it.
      if (!d.steps.empty()) {
        std::vector<long long> weight(d.steps.size(), 0);
        std::map<int, long long> input_uses;
        weight.back() = 1;
        for (int si = static_cast<int>(d.steps.size()) - 1; si >= 0; --si) {
          if (weight[si] == 0) continue;
          for (Ref r : {d.steps[si].left, d.steps[si].right}) {
            if (r.kind == Ref::step) {
              if (r.index >= 0 && r.index < si) weight[r.index] += weight[si];
            } else {
              input_uses[r.index] += weight[si];
            }
          }
        }
        for (auto& [id, n] : input_uses)
          if (n > mode.k)
            rep.flag(base + static_cast<int>(d.steps.size()),
                     "occurrence " + std::to_string(id) + " used " +
                         std::to_string(n) + " times, bound " +
                         std::to_string(mode.k));
      }
      break;
    }
  }
  return rep;
}

}  // namespace detail

// Validates a refutation: every resolvent recomputes, the final clause is
// empty, and the mode constraint holds.  Failures are reported, not thrown.
inline CheckReport check(const Formula& f, const Refutation& r, CheckMode mode) {
  return detail::check_impl(f, r, mode, true);
}

// Same validation for a derivation with an arbitrary conclusion.
inline CheckReport check_derivation(const Formula& f, const Derivation& d,
                                    CheckMode mode) {
  return detail::check_impl(f, d, mode, false);
}

namespace detail {

inline Clause edge_clause(const Formula& f, const PathEdge& e) {
  const Clause& c = f.clause(e.clause_id);
  Clause expect = (e.from == ~e.to) ? make_clause(std::vector<Lit>{e.to})
                                    : make_clause({~e.from, e.to});
  if (c != expect)
    throw error(errc::broken_chain,
                "edge " + std::to_string(e.from.dimacs()) + "->" +
                    std::to_string(e.to.dimacs()) + " does not match occurrence " +
                    std::to_string(e.clause_id));
  return c;
}

}  // namespace detail

// Left-to-right fold of an implication chain into resolution steps: derives
// (~start v end), or the unit (end) when start = ~end, one step per interior
// vertex.
inline Derivation chain_to_derivation(const LiteralPath& path, const Formula& f) {
  if (path.edges.empty())
    throw error(errc::broken_chain, "empty path");
  Derivation d;
  detail::edge_clause(f, path.edges[0]);
  Ref acc_ref = Ref::in(path.edges[0].clause_id);
  Clause acc = f.clause(path.edges[0].clause_id);
  for (size_t i = 1; i < path.edges.size(); ++i) {
    const PathEdge& e = path.edges[i];
    if (e.from != path.edges[i - 1].to)
      throw error(errc::broken_chain, "edges do not chain head-to-tail");
    Clause ec = detail::edge_clause(f, e);
    int pivot = e.from.var();
    if (!acc.contains_var(pivot) || !ec.contains_var(pivot))
      throw error(errc::broken_chain, "cannot fold at " + std::to_string(e.from.dimacs()));
    d.steps.push_back(detail::make_step(acc_ref, acc, Ref::in(e.clause_id), ec, pivot));
    acc = d.steps.back().resolvent;
    acc_ref = Ref::at(static_cast<int>(d.steps.size()) - 1);
  }
  d.conclusion = acc_ref;
  return d;
}

namespace detail {

// Fold of a path prefix with early stop at the unit (target); never applies
// a repair (caller guarantees distinct clauses).
inline std::pair<Ref, Clause> fold_to_unit(Derivation& d, const Formula& f,
                                           const std::vector<PathEdge>& edges,
                                           size_t lo, size_t hi, Lit target) {
  Ref acc_ref = Ref::in(edges[lo].clause_id);
  Clause acc = f.clause(edges[lo].clause_id);
  Clause goal = make_clause(std::vector<Lit>{target});
  for (size_t i = lo + 1; i <= hi && acc != goal; ++i) {
    const PathEdge& e = edges[i];
    Clause ec = f.clause(e.clause_id);
    int pivot = e.from.var();
    d.steps.push_back(make_step(acc_ref, acc, Ref::in(e.clause_id), ec, pivot));
    acc = d.steps.back().resolvent;
    acc_ref = Ref::at(static_cast<int>(d.steps.size()) - 1);
  }
  return {acc_ref, acc};
}

}  // namespace detail

// Derivation of the unit (target) using each clause occurrence at most once.
// Follows the path ~target -> target; if some edge's same-clause partner
// occurs earlier in the path, the path is truncated before that edge and the
// prefix is split at the partner into a derivation of (target v ~u) and a
// derivation of (u), which resolve to (target).
inline Derivation derive_unit_read_once(const Formula& f, Lit target) {
  ImplicationGraph g = build_graph(f);
  auto path = find_path(g, ~target, target);
  if (!path || path->edges.empty())
    throw error(errc::not_derivable,
                "no path to " + std::to_string(target.dimacs()));
  const auto& edges = path->edges;

  Derivation d;
  Clause goal = make_clause(std::vector<Lit>{target});
  std::map<int, size_t> first_use;  // clause id -> position
  Ref acc_ref = Ref::in(edges[0].clause_id);
  Clause acc = f.clause(edges[0].clause_id);
  first_use[edges[0].clause_id] = 0;

  for (size_t i = 1; i < edges.size() && acc != goal; ++i) {
    const PathEdge& e = edges[i];
    auto seen = first_use.find(e.clause_id);
    if (seen != first_use.end()) {
      // Repair: the prefix before e is duplicate-free.  Its fold up to and
      // including the partner edge is (target v ~u) where u is e's tail; the
      // segment from the partner's head to e's tail derives (u).
      size_t j = seen->second;
      Derivation left;
      auto [lref, lacc] = detail::fold_to_unit(left, f, edges, 0, j, target);
      assert(lacc.size() == 2 && lacc.contains(~e.from));
      Derivation right;
      auto [rref, racc] = detail::fold_to_unit(right, f, edges, j + 1, i - 1, e.from);
      assert(racc == make_clause(std::vector<Lit>{e.from}));
      d = Derivation{};
      Ref la = append_derivation(d, left);
      Ref ra = append_derivation(d, right);
      d.steps.push_back(detail::make_step(la, lacc, ra, racc, e.from.var()));
      acc = d.steps.back().resolvent;
      acc_ref = Ref::at(static_cast<int>(d.steps.size()) - 1);
      break;
    }
    first_use[e.clause_id] = i;
    Clause ec = f.clause(e.clause_id);
    d.steps.push_back(detail::make_step(acc_ref, acc, Ref::in(e.clause_id), ec,
                                        e.from.var()));
    acc = d.steps.back().resolvent;
    acc_ref = Ref::at(static_cast<int>(d.steps.size()) - 1);
  }

  if (acc != goal)
    throw error(errc::not_derivable, "fold did not reach the target unit");
  d.conclusion = acc_ref;

  // The result must be clause-disjoint; the single truncation guarantees it.
  std::set<int> used;
  for (auto& s : d.steps)
    for (Ref r : {s.left, s.right})
      if (r.kind == Ref::input) {
        assert(!used.count(r.index));
        used.insert(r.index);
      }
  if (d.trivial()) d.conclusion = acc_ref;
  return d;
}

}  // namespace ror2
