#pragma once

#include <deque>
#include <optional>

#include "ror2/core.hpp"

namespace ror2 {

// Literal-vertex digraph.  Clause (L v K) contributes edges ~L->K and ~K->L,
// both labeled with its occurrence id; unit (L) contributes ~L->L.
// Vertices are numbered 2*i for the positive and 2*i+1 for the negative
// literal of the i-th occurring variable (ascending), so vertex order equals
// (variable index, polarity) order.
class ImplicationGraph {
 public:
  struct Edge {
    int to;
    int clause_id;
  };

  explicit ImplicationGraph(std::vector<int> vars) : vars_(std::move(vars)) {
    adj_.resize(2 * vars_.size());
  }

  int nvertices() const { return static_cast<int>(adj_.size()); }
  int nedges() const {
    int n = 0;
    for (auto& a : adj_) n += static_cast<int>(a.size());
    return n;
  }
  const std::vector<int>& vars() const { return vars_; }

  std::optional<int> vertex(Lit l) const {
    int lo = 0, hi = static_cast<int>(vars_.size()) - 1;
    while (lo <= hi) {
      int mid = (lo + hi) / 2;
      if (vars_[mid] == l.var())
        return 2 * mid + (l.positive() ? 0 : 1);
      if (vars_[mid] < l.var()) lo = mid + 1;
      else hi = mid - 1;
    }
    return std::nullopt;
  }
  Lit lit_at(int v) const {
    int var = vars_[v / 2];
    return (v % 2 == 0) ? pos_lit(var) : neg_lit(var);
  }
  static int mirror(int v) { return v ^ 1; }

  const std::vector<Edge>& out(int v) const { return adj_[v]; }

  void add_edge(int from, int to, int clause_id) {
    adj_[from].push_back({to, clause_id});
  }
  void sort_edges() {
    for (auto& a : adj_)
      std::sort(a.begin(), a.end(), [](const Edge& x, const Edge& y) {
        if (x.to != y.to) return x.to < y.to;
        return x.clause_id < y.clause_id;
      });
  }

 private:
  std::vector<int> vars_;
  std::vector<std::vector<Edge>> adj_;
};

inline ImplicationGraph build_graph(const Formula& f) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "build_graph");
  ImplicationGraph g(f.vars());
  for (auto& o : f.occurrences()) {
    const Clause& c = o.clause;
    if (c.unit()) {
      int v = *g.vertex(c[0]);
      g.add_edge(ImplicationGraph::mirror(v), v, o.id);
    } else {
      int a = *g.vertex(c[0]);
      int b = *g.vertex(c[1]);
      g.add_edge(ImplicationGraph::mirror(a), b, o.id);
      g.add_edge(ImplicationGraph::mirror(b), a, o.id);
    }
  }
  g.sort_edges();
  return g;
}

struct PathEdge {
  Lit from;
  Lit to;
  int clause_id;
};

// A chain of head-to-tail edges; records each edge's clause occurrence id.
struct LiteralPath {
  Lit start;
  Lit end;
  std::vector<PathEdge> edges;
};

// Deterministic breadth-first path: vertices explored in (variable, polarity)
// order, ties between parallel edges broken by lowest clause occurrence id.
inline std::optional<LiteralPath> find_path(const ImplicationGraph& g, Lit from,
                                            Lit to) {
  auto vs = g.vertex(from);
  auto vt = g.vertex(to);
  if (!vs || !vt) return std::nullopt;
  if (*vs == *vt) return LiteralPath{from, to, {}};
  std::vector<int> parent(g.nvertices(), -1);
  std::vector<int> parent_clause(g.nvertices(), -1);
  std::deque<int> queue{*vs};
  std::vector<char> seen(g.nvertices(), 0);
  seen[*vs] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (auto& e : g.out(v)) {
      if (seen[e.to]) continue;
      seen[e.to] = 1;
      parent[e.to] = v;
      parent_clause[e.to] = e.clause_id;
      if (e.to == *vt) {
        LiteralPath p{from, to, {}};
        for (int w = *vt; w != *vs; w = parent[w])
          p.edges.push_back({g.lit_at(parent[w]), g.lit_at(w), parent_clause[w]});
        std::reverse(p.edges.begin(), p.edges.end());
        return p;
      }
      queue.push_back(e.to);
    }
  }
  return std::nullopt;
}

// Plain reachability, shared by the solver and the decision procedures.
inline bool reachable(const ImplicationGraph& g, int from, int to) {
  if (from == to) return true;
  std::vector<char> seen(g.nvertices(), 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (auto& e : g.out(v)) {
      if (seen[e.to]) continue;
      if (e.to == to) return true;
      seen[e.to] = 1;
      queue.push_back(e.to);
    }
  }
  return false;
}

namespace detail {

// Iterative Tarjan SCC over the implication graph.  Components are numbered
// in completion order (reverse topological).
inline std::vector<int> tarjan_scc(const ImplicationGraph& g, int& ncomps) {
  int n = g.nvertices();
  std::vector<int> comp(n, -1), low(n), num(n, -1);
  std::vector<int> stack;
  std::vector<std::pair<int, size_t>> call;
  int counter = 0;
  ncomps = 0;
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      if (ei == 0) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
      }
      bool descended = false;
      while (ei < g.out(v).size()) {
        int w = g.out(v)[ei].to;
        ++ei;
        if (num[w] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (comp[w] == -1) low[v] = std::min(low[v], num[w]);
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          comp[w] = ncomps;
          if (w == v) break;
        }
        ++ncomps;
      }
      int child = v;
      call.pop_back();
      if (!call.empty()) {
        int parent = call.back().first;
        low[parent] = std::min(low[parent], low[child]);
      }
    }
  }
  return comp;
}

// Satisfiability with empty clauses tolerated (an empty clause is false).
inline bool satisfiable(const Formula& f) {
  if (f.has_empty_clause()) return false;
  if (f.empty()) return true;
  ImplicationGraph g = build_graph(f);
  int ncomps = 0;
  std::vector<int> comp = tarjan_scc(g, ncomps);
  for (int v = 0; v < g.nvertices(); v += 2)
    if (comp[v] == comp[v + 1]) return false;
  return true;
}

}  // namespace detail

struct SatResult {
  std::optional<Assignment> model;  // present iff satisfiable
  int unsat_var = 0;                // witness: paths x->~x and ~x->x exist
  bool sat() const { return model.has_value(); }
};

// SCC-based 2SAT.  Unsat witness is the smallest variable whose two literals
// share a component.
inline SatResult decide_sat(const Formula& f) {
  if (f.has_empty_clause())
    throw error(errc::empty_clause_present, "decide_sat");
  if (f.empty()) return SatResult{Assignment{}, 0};
  ImplicationGraph g = build_graph(f);
  int ncomps = 0;
  std::vector<int> comp = detail::tarjan_scc(g, ncomps);
  for (int v = 0; v < g.nvertices(); v += 2)
    if (comp[v] == comp[v + 1])
      return SatResult{std::nullopt, g.lit_at(v).var()};
  Assignment a;
  for (int v = 0; v < g.nvertices(); v += 2) {
    // Tarjan numbers components in reverse topological order, so the literal
    // whose component finishes first lies downstream and must be true.
    a.set(g.lit_at(v).var(), comp[v] < comp[v + 1]);
  }
  assert(evaluate(f, a));
  return SatResult{std::move(a), 0};
}

}  // namespace ror2
