#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ror2/decision.hpp"
#include "ror2/dimacs.hpp"

namespace ror2 {

// Directed graph on vertices 0..n-1; no self-loops, no parallel duplicates.
// Edges are kept sorted, which fixes the clause enumeration order of the
// reduction.
struct Digraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  static Digraph make(int n, std::vector<std::pair<int, int>> es) {
    Digraph g;
    g.n = n;
    std::sort(es.begin(), es.end());
    for (size_t i = 0; i < es.size(); ++i) {
      auto [u, v] = es[i];
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw error(errc::bad_vertex, std::to_string(u) + "->" + std::to_string(v));
      if (u == v) throw error(errc::self_loop, "vertex " + std::to_string(u));
      if (i > 0 && es[i] == es[i - 1])
        throw error(errc::parallel_edge, std::to_string(u) + "->" + std::to_string(v));
    }
    g.edges = std::move(es);
    return g;
  }

  bool has_edge(int u, int v) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
  }
  std::vector<int> out(int u) const {
    std::vector<int> vs;
    for (auto& [a, b] : edges)
      if (a == u) vs.push_back(b);
    return vs;
  }
};

enum class Disjoint { vertex, edge };

// Witness for the cycle problems: a path s..t and a path t..s, given as
// vertex sequences.
struct CyclePair {
  std::vector<int> path_st;
  std::vector<int> path_ts;
  Disjoint mode = Disjoint::vertex;
};

inline bool validate_cycle_pair(const Digraph& g, int s, int t,
                                const CyclePair& cp) {
  auto path_ok = [&](const std::vector<int>& p, int from, int to) {
    if (p.size() < 2 || p.front() != from || p.back() != to) return false;
    for (size_t i = 0; i + 1 < p.size(); ++i)
      if (!g.has_edge(p[i], p[i + 1])) return false;
    return true;
  };
  if (!path_ok(cp.path_st, s, t) || !path_ok(cp.path_ts, t, s)) return false;
  if (cp.mode == Disjoint::vertex) {
    // inner vertices simple within each path and disjoint across paths
    std::vector<int> inner1(cp.path_st.begin() + 1, cp.path_st.end() - 1);
    std::vector<int> inner2(cp.path_ts.begin() + 1, cp.path_ts.end() - 1);
    std::vector<int> all = inner1;
    all.insert(all.end(), inner2.begin(), inner2.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
    for (int v : all)
      if (v == s || v == t) return false;
  } else {
    std::vector<std::pair<int, int>> es;
    for (size_t i = 0; i + 1 < cp.path_st.size(); ++i)
      es.push_back({cp.path_st[i], cp.path_st[i + 1]});
    for (size_t i = 0; i + 1 < cp.path_ts.size(); ++i)
      es.push_back({cp.path_ts[i], cp.path_ts[i + 1]});
    std::sort(es.begin(), es.end());
    if (std::adjacent_find(es.begin(), es.end()) != es.end()) return false;
  }
  return true;
}

// 2-DPP -> C-DPP: G' = (V u {s,t}, E u {(s,s1),(t2,s),(t1,t),(t,s2)}); the
// new vertices take indices n and n+1.
struct CdppInstance {
  Digraph g;
  int s = 0;
  int t = 0;
};

inline CdppInstance dpp_to_cdpp(const Digraph& g, int s1, int t1, int s2, int t2) {
  int vs[4] = {s1, t1, s2, t2};
  for (int i = 0; i < 4; ++i) {
    if (vs[i] < 0 || vs[i] >= g.n) throw error(errc::bad_vertex, std::to_string(vs[i]));
    for (int j = i + 1; j < 4; ++j)
      if (vs[i] == vs[j])
        throw error(errc::vertices_not_distinct, "designated vertices overlap");
  }
  int s = g.n, t = g.n + 1;
  auto es = g.edges;
  es.push_back({s, s1});
  es.push_back({t2, s});
  es.push_back({t1, t});
  es.push_back({t, s2});
  return {Digraph::make(g.n + 2, std::move(es)), s, t};
}

// The 2CNF image of a cycle instance, with the edge <-> occurrence
// provenance required to invert refutations back into cycles.
struct Reduction2Cnf {
  Formula formula;
  int s = 0;
  int t = 0;
  std::map<int, std::pair<int, int>> occ_edge;  // occurrence id -> edge
  std::map<int, int> vertex_var;                // vertex -> variable (x0 = 1)
  std::map<int, int> var_vertex;
};

// Vertex v_i gets variable x_i; edges touching s or t use x_0 (variable 1):
// (s,v) -> (x0 -> xv), (t,v) -> (~x0 -> xv), (v,s) -> (xv -> x0),
// (v,t) -> (xv -> ~x0), (v,w) -> (xv -> xw); the degenerate edges (s,t) and
// (t,s) map to the units (~x0) and (x0).
inline Reduction2Cnf cycle_to_2cnf(const Digraph& g, int s, int t) {
  if (s == t) throw error(errc::vertices_not_distinct, "s = t");
  if (s < 0 || s >= g.n || t < 0 || t >= g.n)
    throw error(errc::bad_vertex, "designated vertex out of range");
  Reduction2Cnf red;
  red.s = s;
  red.t = t;
  int next_var = 2;
  for (int v = 0; v < g.n; ++v) {
    if (v == s || v == t) continue;
    red.vertex_var[v] = next_var;
    red.var_vertex[next_var] = v;
    ++next_var;
  }
  auto lit_head = [&](int v) {  // literal asserted when the edge is taken
    if (v == s) return pos_lit(1);
    if (v == t) return neg_lit(1);
    return pos_lit(red.vertex_var[v]);
  };
  std::vector<Clause> clauses;
  for (auto& [u, v] : g.edges) {
    // implication lit(u) -> lit(v), i.e. (~lit(u) v lit(v))
    Lit a = ~lit_head(u);
    Lit b = lit_head(v);
    clauses.push_back(a == b ? make_clause(std::vector<Lit>{a})
                             : make_clause({a, b}));
    red.occ_edge[static_cast<int>(clauses.size())] = {u, v};
  }
  red.formula = Formula::from_clauses(clauses);
  return red;
}

// Exact oracle for the cycle problems by exhaustive enumeration of simple
// paths; default vertex bound keeps it at desk scale.
inline std::optional<CyclePair> brute_force_cycle(const Digraph& g, int s, int t,
                                                  Disjoint mode,
                                                  int max_vertices = 10) {
  if (g.n > max_vertices)
    throw error(errc::too_large, std::to_string(g.n) + " vertices");
  if (s == t) throw error(errc::vertices_not_distinct, "s = t");

  std::vector<int> p1{s};
  std::vector<char> on1(g.n, 0);
  on1[s] = 1;
  std::optional<CyclePair> result;

  auto second = [&](const std::vector<int>& first) -> std::optional<std::vector<int>> {
    std::vector<char> banned_vertex(g.n, 0);
    std::set<std::pair<int, int>> banned_edge;
    if (mode == Disjoint::vertex) {
      for (size_t i = 1; i + 1 < first.size(); ++i) banned_vertex[first[i]] = 1;
    } else {
      for (size_t i = 0; i + 1 < first.size(); ++i)
        banned_edge.insert({first[i], first[i + 1]});
    }
    std::vector<int> p2{t};
    std::vector<char> on2(g.n, 0);
    on2[t] = 1;
    std::optional<std::vector<int>> found;
    std::function<bool(int)> dfs2 = [&](int v) -> bool {
      if (v == s) {
        found = p2;
        return true;
      }
      for (int w : g.out(v)) {
        if (on2[w] || banned_vertex[w]) continue;
        if (mode == Disjoint::edge && banned_edge.count({v, w})) continue;
        on2[w] = 1;
        p2.push_back(w);
        if (dfs2(w)) return true;
        p2.pop_back();
        on2[w] = 0;
      }
      return false;
    };
    for (int w : g.out(t)) {
      if (banned_vertex[w] && w != s) continue;
      if (mode == Disjoint::edge && banned_edge.count({t, w})) continue;
      if (w == s) return std::vector<int>{t, s};
      if (on2[w]) continue;
      on2[w] = 1;
      p2.push_back(w);
      if (dfs2(w)) return found;
      p2.pop_back();
      on2[w] = 0;
    }
    return std::nullopt;
  };

  std::function<bool(int)> dfs1 = [&](int v) -> bool {
    if (v == t) {
      if (auto p2 = second(p1)) {
        result = CyclePair{p1, *p2, mode};
        return true;
      }
      return false;
    }
    for (int w : g.out(v)) {
      if (on1[w]) continue;
      if (w == s) continue;
      on1[w] = 1;
      p1.push_back(w);
      if (dfs1(w)) return true;
      p1.pop_back();
      on1[w] = 0;
    }
    return false;
  };
  // direct edge s->t is also a path
  for (int w : g.out(s)) {
    if (w == t) {
      std::vector<int> first{s, t};
      if (auto p2 = second(first)) return CyclePair{first, *p2, mode};
      continue;
    }
    on1[w] = 1;
    p1.push_back(w);
    if (dfs1(w)) return result;
    p1.pop_back();
    on1[w] = 0;
  }
  return std::nullopt;
}

// Replays a checker-valid refutation of a reduced formula back into a cycle:
// every input occurrence is one provenance edge, and each resolution step
// contracting (L->K),(K->R) into (L->R) is undone by splicing K back in.
inline CyclePair refutation_to_cycle(const Refutation& r, const Reduction2Cnf& red,
                                     Disjoint mode) {
  const Formula& f = red.formula;
  auto vertex_of = [&](Lit l) -> std::optional<int> {
    if (l.var() == 1) return l.positive() ? red.s : red.t;
    auto it = red.var_vertex.find(l.var());
    if (it == red.var_vertex.end()) return std::nullopt;
    if (!l.positive()) return std::nullopt;
    return it->second;
  };
  // path of a clause viewed as an implication A -> B: from vertex(A) to
  // vertex(B), where A is negated into the clause
  using EdgeList = std::vector<std::pair<int, int>>;
  auto input_path = [&](int id) -> EdgeList {
    auto it = red.occ_edge.find(id);
    if (it == red.occ_edge.end())
      throw error(errc::not_from_reduction, "occurrence " + std::to_string(id) + " has no provenance");
    return {it->second};
  };
  auto ends = [&](const Clause& c) -> std::pair<int, int> {
    // orientation (~a -> b) for the unique arrangement with mapped vertices
    std::vector<Lit> ls = c.lits();
    if (c.unit()) ls.push_back(ls[0]);
    for (int flip = 0; flip < 2; ++flip) {
      Lit a = flip ? ls[1] : ls[0];
      Lit b = flip ? ls[0] : ls[1];
      auto va = vertex_of(~a);
      auto vb = vertex_of(b);
      if (va && vb && (c.unit() || *va != *vb)) return {*va, *vb};
      if (c.unit()) break;
    }
    throw error(errc::not_from_reduction, "clause " + c.str() + " is not an implication of the reduction");
  };

  std::vector<EdgeList> step_paths(r.steps.size());
  auto path_of = [&](Ref ref) -> EdgeList {
    if (ref.kind == Ref::input) return input_path(ref.index);
    return step_paths[ref.index];
  };
  for (size_t i = 0; i < r.steps.size(); ++i) {
    const Step& st = r.steps[i];
    Clause cl = detail::deref(f, r, st.left);
    Clause cr = detail::deref(f, r, st.right);
    EdgeList pl = path_of(st.left);
    EdgeList pr = path_of(st.right);
    auto [la, lb] = ends(cl);
    auto [ra, rb] = ends(cr);
    (void)la;
    (void)rb;
    // the left premise holds the pivot positively, so its path ends at the
    // pivot vertex and the right premise's path starts there
    if (lb != ra)
      throw error(errc::not_from_reduction, "step does not splice at its pivot");
    EdgeList joined = pl;
    joined.insert(joined.end(), pr.begin(), pr.end());
    step_paths[i] = std::move(joined);
  }
  if (r.steps.empty() || !r.steps.back().resolvent.empty())
    throw error(errc::not_from_reduction, "not a refutation");
  const Step& last = r.steps.back();
  Clause cl = detail::deref(f, r, last.left);
  EdgeList pos_path = path_of(last.left);   // derivation of (x0): t .. s
  EdgeList neg_path = path_of(last.right);  // derivation of (~x0): s .. t
  if (!(cl.unit() && cl[0] == pos_lit(1)))
    throw error(errc::not_from_reduction, "final step does not resolve on x0");
  auto to_vertices = [&](const EdgeList& es) {
    std::vector<int> p{es[0].first};
    for (auto& [u, v] : es) {
      if (p.back() != u)
        throw error(errc::not_from_reduction, "spliced path is broken");
      p.push_back(v);
    }
    return p;
  };
  CyclePair cp;
  cp.mode = mode;
  cp.path_st = to_vertices(neg_path);
  cp.path_ts = to_vertices(pos_path);
  return cp;
}

// ---- seeded generators ----------------------------------------------------

namespace detail {

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, bound)
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace detail

inline Digraph gen_random_digraph(int n, double p, std::uint64_t seed) {
  if (n < 2) throw error(errc::precondition_violated, "need at least 2 vertices");
  detail::SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> es;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (rng.unit() < p) es.push_back({u, v});
    }
  return Digraph::make(n, std::move(es));
}

inline Formula gen_random_2cnf(int n, int m, std::uint64_t seed) {
  if (n < 1) throw error(errc::precondition_violated, "need at least 1 variable");
  detail::SplitMix64 rng(seed);
  std::vector<Clause> cs;
  for (int i = 0; i < m; ++i) {
    bool unit = n == 1 || rng.below(10) == 0;
    int v1 = static_cast<int>(rng.below(n)) + 1;
    Lit l1 = rng.below(2) ? pos_lit(v1) : neg_lit(v1);
    if (unit) {
      cs.push_back(make_clause(std::vector<Lit>{l1}));
      continue;
    }
    int v2 = static_cast<int>(rng.below(n - 1)) + 1;
    if (v2 >= v1) ++v2;
    Lit l2 = rng.below(2) ? pos_lit(v2) : neg_lit(v2);
    cs.push_back(make_clause({l1, l2}));
  }
  return Formula::from_clauses(cs);
}

// Grows MU(1) formulas by inverting variable-disjunctive splits: two
// variable-disjoint MU(1) formulas F1, F2 and a fresh variable x combine
// into (x v u) for a unit u of F1, (~x v w) for a unit w of F2, rest
// unchanged.  Each leaf (y) ^ (~y) keeps at least one unit available.
inline Formula gen_mu1(int target_vars, std::uint64_t seed) {
  if (target_vars < 1) throw error(errc::precondition_violated, "need at least 1 variable");
  detail::SplitMix64 rng(seed);
  int next_var = 1;
  auto fresh_leaf = [&]() {
    int y = next_var++;
    return std::vector<Clause>{make_clause({y}), make_clause({-y})};
  };
  std::vector<Clause> acc = fresh_leaf();
  while (next_var <= target_vars - 1) {
    std::vector<Clause> leaf = fresh_leaf();
    int x = next_var++;
    // pick a unit of acc to fatten with x, and one of leaf with ~x
    std::vector<size_t> units;
    for (size_t i = 0; i < acc.size(); ++i)
      if (acc[i].unit()) units.push_back(i);
    size_t ua = units[rng.below(units.size())];
    size_t ul = rng.below(2);
    acc[ua] = make_clause({acc[ua][0], pos_lit(x)});
    leaf[ul] = make_clause({leaf[ul][0], neg_lit(x)});
    acc.insert(acc.end(), leaf.begin(), leaf.end());
  }
  // stable shuffle for variety
  for (size_t i = acc.size(); i > 1; --i)
    std::swap(acc[i - 1], acc[rng.below(i)]);
  return Formula::from_clauses(acc);
}

// ---- digraph text format ---------------------------------------------------
// `d <nvertices>`, one `e <u> <v>` per edge, designated vertices in `s <u>`
// and `t <v>` lines (twice each for 2-DPP instances).

struct DigraphFile {
  Digraph g;
  std::vector<int> sources;
  std::vector<int> sinks;
};

inline DigraphFile parse_digraph(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> es;
  std::vector<int> sources, sinks;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "d") {
      if (n >= 0 || !(ls >> n) || n < 0) throw error(errc::syntax, "bad d line");
    } else if (tok == "e") {
      int u, v;
      if (!(ls >> u >> v)) throw error(errc::syntax, "bad e line");
      es.push_back({u, v});
    } else if (tok == "s") {
      int u;
      if (!(ls >> u)) throw error(errc::syntax, "bad s line");
      sources.push_back(u);
    } else if (tok == "t") {
      int v;
      if (!(ls >> v)) throw error(errc::syntax, "bad t line");
      sinks.push_back(v);
    } else {
      throw error(errc::syntax, "unknown line " + tok);
    }
  }
  if (n < 0) throw error(errc::syntax, "missing d line");
  return {Digraph::make(n, std::move(es)), sources, sinks};
}

inline DigraphFile parse_digraph(const std::string& text) {
  std::istringstream in(text);
  return parse_digraph(in);
}

inline void write_digraph(std::ostream& out, const Digraph& g,
                          const std::vector<int>& sources = {},
                          const std::vector<int>& sinks = {}) {
  out << "d " << g.n << "\n";
  for (int s : sources) out << "s " << s << "\n";
  for (int t : sinks) out << "t " << t << "\n";
  for (auto& [u, v] : g.edges) out << "e " << u << " " << v << "\n";
}

}  // namespace ror2
