#pragma once

#include <istream>
#include <ostream>
#include <sstream>

#include "ror2/resolution.hpp"

namespace ror2 {

// Proof document: header `p refutation <nvars> <nclauses>`, then one line
//   s <step-id> <pivot-var> <ref1> <ref2> <lit>* 0
// per step.  Input occurrences are refs 1..m; derived steps are numbered
// m+1, m+2, ...; the empty-clause step carries no literals before its
// terminating 0.
inline void write_proof(std::ostream& out, const Refutation& r, const Formula& f) {
  out << "p refutation " << f.max_var() << " " << f.size() << "\n";
  for (size_t i = 0; i < r.steps.size(); ++i) {
    const Step& s = r.steps[i];
    out << "s " << wire_id(f, Ref::at(static_cast<int>(i))) << " " << s.pivot
        << " " << wire_id(f, s.left) << " " << wire_id(f, s.right);
    for (int j = 0; j < s.resolvent.size(); ++j)
      out << " " << s.resolvent[j].dimacs();
    out << " 0\n";
  }
}

inline std::string write_proof(const Refutation& r, const Formula& f) {
  std::ostringstream out;
  write_proof(out, r, f);
  return out.str();
}

inline Refutation parse_proof(std::istream& in, const Formula& f) {
  std::string line;
  bool header_seen = false;
  int base = f.max_id();
  int prev_id = base;
  Refutation r;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "p") {
      if (header_seen) throw error(errc::syntax, "duplicate header");
      std::string fmt;
      long nv, nc;
      if (!(ls >> fmt >> nv >> nc) || fmt != "refutation")
        throw error(errc::syntax, "bad proof header");
      if (nv != f.max_var() || nc != f.size())
        throw error(errc::header_mismatch, "proof header does not match formula");
      header_seen = true;
      continue;
    }
    if (tok != "s") throw error(errc::syntax, "expected s line");
    if (!header_seen) throw error(errc::syntax, "step before header");
    long id, pivot, ref1, ref2;
    if (!(ls >> id >> pivot >> ref1 >> ref2))
      throw error(errc::syntax, "malformed step line");
    if (id != prev_id + 1)
      throw error(errc::nonmonotone_ids,
                  "step id " + std::to_string(id) + " after " + std::to_string(prev_id));
    prev_id = static_cast<int>(id);
    if (pivot <= 0) throw error(errc::syntax, "pivot must be a positive variable");
    auto to_ref = [&](long w) {
      if (w <= 0) throw error(errc::syntax, "bad reference");
      if (w <= base) {
        if (!f.has_id(static_cast<int>(w)))
          throw error(errc::dangling_reference, "occurrence " + std::to_string(w));
        return Ref::in(static_cast<int>(w));
      }
      if (w >= id)
        throw error(errc::dangling_reference, "forward reference " + std::to_string(w));
      return Ref::at(static_cast<int>(w) - base - 1);
    };
    Ref left = to_ref(ref1);
    Ref right = to_ref(ref2);
    std::vector<Lit> lits;
    long v;
    bool terminated = false;
    while (ls >> v) {
      if (v == 0) {
        terminated = true;
        break;
      }
      lits.push_back(Lit(static_cast<int>(v)));
    }
    if (!terminated || (ls >> v))
      throw error(errc::syntax, "step line not 0-terminated");
    r.steps.push_back(Step{left, right, static_cast<int>(pivot), make_clause(lits)});
  }
  if (!header_seen) throw error(errc::syntax, "missing proof header");
  if (r.steps.empty()) throw error(errc::syntax, "proof has no steps");
  r.conclusion = Ref::at(static_cast<int>(r.steps.size()) - 1);
  return r;
}

inline Refutation parse_proof(const std::string& text, const Formula& f) {
  std::istringstream in(text);
  return parse_proof(in, f);
}

}  // namespace ror2
