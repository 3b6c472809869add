#pragma once

#include <istream>
#include <ostream>
#include <sstream>

#include "ror2/core.hpp"

namespace ror2 {

// DIMACS CNF.  Occurrence ids are assigned in file order, 1-based; comment
// lines are skipped; the header is validated against the body.
inline Formula parse_dimacs(std::istream& in) {
  std::string line;
  long declared_vars = -1, declared_clauses = -1;
  std::vector<Clause> clauses;
  std::vector<Lit> cur;
  bool in_clause = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "p") {
      if (declared_vars >= 0) throw error(errc::syntax, "duplicate header");
      std::string fmt;
      if (!(ls >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf" ||
          declared_vars < 0 || declared_clauses < 0)
        throw error(errc::syntax, "bad header line");
      continue;
    }
    if (declared_vars < 0) throw error(errc::syntax, "clause before header");
    ls.clear();
    ls.str(line);
    long v;
    while (ls >> v) {
      if (v == 0) {
        clauses.push_back(make_clause(cur));  // may throw arity/tautology
        cur.clear();
        in_clause = false;
      } else {
        if (v < -declared_vars || v > declared_vars)
          throw error(errc::header_mismatch,
                      "literal " + std::to_string(v) + " out of range");
        cur.push_back(Lit(static_cast<int>(v)));
        in_clause = true;
      }
    }
    if (!ls.eof()) throw error(errc::syntax, "malformed token");
  }
  if (declared_vars < 0) throw error(errc::syntax, "missing header");
  if (in_clause) throw error(errc::syntax, "unterminated clause");
  if (static_cast<long>(clauses.size()) != declared_clauses)
    throw error(errc::header_mismatch,
                "header declares " + std::to_string(declared_clauses) +
                    " clauses, body has " + std::to_string(clauses.size()));
  return Formula::from_clauses(clauses);
}

inline Formula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

inline void write_dimacs(std::ostream& out, const Formula& f) {
  out << "p cnf " << f.max_var() << " " << f.size() << "\n";
  for (auto& o : f.occurrences()) {
    for (int i = 0; i < o.clause.size(); ++i) out << o.clause[i].dimacs() << " ";
    out << "0\n";
  }
}

inline std::string write_dimacs(const Formula& f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

}  // namespace ror2
