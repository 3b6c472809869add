#pragma once

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ror2 {

enum class errc {
  tautology,
  arity,
  unknown_id,
  incomplete_assignment,
  syntax,
  header_mismatch,
  dangling_reference,
  nonmonotone_ids,
  empty_clause_present,
  not_derivable,
  pivot_missing,
  resolvent_tautological,
  broken_chain,
  precondition_violated,
  provenance_lost,
  pattern_mismatch,
  vertices_not_distinct,
  self_loop,
  parallel_edge,
  bad_vertex,
  too_large,
  not_from_reduction,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::tautology: return "tautology";
    case errc::arity: return "arity";
    case errc::unknown_id: return "unknown-id";
    case errc::incomplete_assignment: return "incomplete-assignment";
    case errc::syntax: return "syntax";
    case errc::header_mismatch: return "header-mismatch";
    case errc::dangling_reference: return "dangling-reference";
    case errc::nonmonotone_ids: return "nonmonotone-ids";
    case errc::empty_clause_present: return "empty-clause-present";
    case errc::not_derivable: return "not-derivable";
    case errc::pivot_missing: return "pivot-missing";
    case errc::resolvent_tautological: return "resolvent-tautological";
    case errc::broken_chain: return "broken-chain";
    case errc::precondition_violated: return "precondition-violated";
    case errc::provenance_lost: return "provenance-lost";
    case errc::pattern_mismatch: return "pattern-mismatch";
    case errc::vertices_not_distinct: return "vertices-not-distinct";
    case errc::self_loop: return "self-loop";
    case errc::parallel_edge: return "parallel-edge";
    case errc::bad_vertex: return "bad-vertex";
    case errc::too_large: return "too-large";
    case errc::not_from_reduction: return "not-from-reduction";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
  errc code;
};

// A literal is a variable (>= 1) with a polarity, stored DIMACS-style as a
// signed nonzero integer.
class Lit {
 public:
  Lit() = default;
  explicit Lit(int dimacs) : code_(dimacs) { assert(dimacs != 0); }

  int var() const { return code_ < 0 ? -code_ : code_; }
  bool positive() const { return code_ > 0; }
  int dimacs() const { return code_; }
  Lit operator~() const { return Lit(-code_); }

  friend bool operator==(Lit a, Lit b) { return a.code_ == b.code_; }
  friend bool operator!=(Lit a, Lit b) { return a.code_ != b.code_; }
  // Canonical order: by variable, positive before negative.
  friend bool operator<(Lit a, Lit b) {
    if (a.var() != b.var()) return a.var() < b.var();
    return a.positive() && !b.positive();
  }

 private:
  int code_ = 0;
};

inline Lit pos_lit(int var) { return Lit(var); }
inline Lit neg_lit(int var) { return Lit(-var); }

// At most two literals, canonically sorted, duplicates merged, never
// tautological.  Zero literals is the empty clause (the contradiction).
class Clause {
 public:
  Clause() = default;

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool unit() const { return size_ == 1; }
  Lit operator[](int i) const {
    assert(i >= 0 && i < size_);
    return lits_[i];
  }

  bool contains(Lit l) const {
    return (size_ > 0 && lits_[0] == l) || (size_ > 1 && lits_[1] == l);
  }
  bool contains_var(int v) const {
    return (size_ > 0 && lits_[0].var() == v) || (size_ > 1 && lits_[1].var() == v);
  }
  // The literal of variable v, if present.
  std::optional<Lit> lit_of_var(int v) const {
    for (int i = 0; i < size_; ++i)
      if (lits_[i].var() == v) return lits_[i];
    return std::nullopt;
  }
  std::vector<Lit> lits() const {
    std::vector<Lit> out;
    for (int i = 0; i < size_; ++i) out.push_back(lits_[i]);
    return out;
  }

  friend bool operator==(const Clause& a, const Clause& b) {
    if (a.size_ != b.size_) return false;
    for (int i = 0; i < a.size_; ++i)
      if (a.lits_[i] != b.lits_[i]) return false;
    return true;
  }
  friend bool operator!=(const Clause& a, const Clause& b) { return !(a == b); }
  friend bool operator<(const Clause& a, const Clause& b) {
    // Lexicographic on the canonical literal sequence, shorter first on ties.
    int n = a.size_ < b.size_ ? a.size_ : b.size_;
    for (int i = 0; i < n; ++i) {
      if (a.lits_[i] != b.lits_[i]) return a.lits_[i] < b.lits_[i];
    }
    return a.size_ < b.size_;
  }

  std::string str() const {
    if (size_ == 0) return "()";
    std::string s = "(";
    for (int i = 0; i < size_; ++i) {
      if (i) s += " ";
      s += std::to_string(lits_[i].dimacs());
    }
    return s + ")";
  }

  friend Clause make_clause(const std::vector<Lit>& in);

 private:
  Lit lits_[2];
  int size_ = 0;
};

inline Clause make_clause(const std::vector<Lit>& in) {
  std::vector<Lit> ls = in;
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  for (size_t i = 0; i + 1 < ls.size(); ++i)
    if (ls[i].var() == ls[i + 1].var())
      throw error(errc::tautology, "clause contains " +
                                       std::to_string(ls[i].dimacs()) + " and " +
                                       std::to_string(ls[i + 1].dimacs()));
  if (ls.size() > 2)
    throw error(errc::arity, "more than 2 distinct literals");
  Clause c;
  c.size_ = static_cast<int>(ls.size());
  for (size_t i = 0; i < ls.size(); ++i) c.lits_[i] = ls[i];
  return c;
}

inline Clause make_clause(std::initializer_list<int> dimacs) {
  std::vector<Lit> ls;
  for (int d : dimacs) ls.push_back(Lit(d));
  return make_clause(ls);
}

inline Clause empty_clause() { return Clause(); }

// Total map variable -> truth value.
class Assignment {
 public:
  void set(int var, bool value) { values_[var] = value; }
  std::optional<bool> get(int var) const {
    auto it = values_.find(var);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  bool lit_true(Lit l) const {
    auto v = get(l.var());
    if (!v) throw error(errc::incomplete_assignment,
                        "variable " + std::to_string(l.var()) + " unassigned");
    return *v == l.positive();
  }
  size_t size() const { return values_.size(); }
  const std::unordered_map<int, bool>& values() const { return values_; }

 private:
  std::unordered_map<int, bool> values_;
};

// Ordered multiset of clause occurrences.  Occurrence ids are unique and
// strictly increasing in storage order; a subformula keeps the parent's ids,
// so duplicate clauses stay distinct occurrences.
class Formula {
 public:
  struct Occ {
    int id;
    Clause clause;
  };

  Formula() = default;

  static Formula from_clauses(const std::vector<Clause>& cs) {
    Formula f;
    f.occs_.reserve(cs.size());
    for (size_t i = 0; i < cs.size(); ++i)
      f.occs_.push_back({static_cast<int>(i) + 1, cs[i]});
    return f;
  }
  static Formula from_occurrences(std::vector<Occ> occs) {
    Formula f;
    f.occs_ = std::move(occs);
    for (size_t i = 0; i + 1 < f.occs_.size(); ++i)
      assert(f.occs_[i].id < f.occs_[i + 1].id);
    return f;
  }

  int size() const { return static_cast<int>(occs_.size()); }
  bool empty() const { return occs_.empty(); }
  const std::vector<Occ>& occurrences() const { return occs_; }
  int max_id() const { return occs_.empty() ? 0 : occs_.back().id; }

  bool has_id(int id) const { return find(id) >= 0; }
  const Clause& clause(int id) const {
    int i = find(id);
    if (i < 0) throw error(errc::unknown_id, "occurrence " + std::to_string(id));
    return occs_[i].clause;
  }

  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(occs_.size());
    for (auto& o : occs_) out.push_back(o.id);
    return out;
  }

  // Sorted distinct occurring variables.
  std::vector<int> vars() const {
    std::vector<int> vs;
    for (auto& o : occs_)
      for (int i = 0; i < o.clause.size(); ++i) vs.push_back(o.clause[i].var());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }
  int nvars() const { return static_cast<int>(vars().size()); }
  int max_var() const {
    int m = 0;
    for (auto& o : occs_)
      for (int i = 0; i < o.clause.size(); ++i)
        m = std::max(m, o.clause[i].var());
    return m;
  }

  bool has_empty_clause() const {
    for (auto& o : occs_)
      if (o.clause.empty()) return true;
    return false;
  }

  Formula subformula(const std::vector<int>& ids) const {
    std::vector<int> want = ids;
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    Formula out;
    size_t j = 0;
    for (auto& o : occs_) {
      if (j < want.size() && want[j] == o.id) {
        out.occs_.push_back(o);
        ++j;
      }
    }
    if (j != want.size())
      throw error(errc::unknown_id, "subformula selects unknown occurrence");
    return out;
  }

  Formula without(int id) const {
    Formula out;
    bool seen = false;
    for (auto& o : occs_) {
      if (o.id == id) {
        seen = true;
        continue;
      }
      out.occs_.push_back(o);
    }
    if (!seen) throw error(errc::unknown_id, "occurrence " + std::to_string(id));
    return out;
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.occs_.size() != b.occs_.size()) return false;
    for (size_t i = 0; i < a.occs_.size(); ++i)
      if (a.occs_[i].id != b.occs_[i].id || a.occs_[i].clause != b.occs_[i].clause)
        return false;
    return true;
  }

 private:
  int find(int id) const {
    int lo = 0, hi = static_cast<int>(occs_.size()) - 1;
    while (lo <= hi) {
      int mid = (lo + hi) / 2;
      if (occs_[mid].id == id) return mid;
      if (occs_[mid].id < id) lo = mid + 1;
      else hi = mid - 1;
    }
    return -1;
  }

  std::vector<Occ> occs_;
};

// Number of clauses minus number of occurring variables.
inline int deficiency(const Formula& f) { return f.size() - f.nvars(); }

inline bool evaluate(const Formula& f, const Assignment& a) {
  for (auto& o : f.occurrences()) {
    bool sat = false;
    for (int i = 0; i < o.clause.size(); ++i)
      if (a.lit_true(o.clause[i])) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

}  // namespace ror2
