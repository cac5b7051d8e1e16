#include "ssc/cnf.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace ssc {

bool model_satisfies(const CnfFormula& f, const Model& m) {
  for (size_t c = 0; c < f.num_clauses(); ++c) {
    bool sat = false;
    for (int lit : f.clause(c))
      if (lit_true(m, lit)) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

void emit_dimacs(const CnfFormula& f, std::ostream& os) {
  os << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  // manual int formatting; iostream is too slow for multi-million clause files
  std::string buf;
  buf.reserve(1 << 16);
  char tmp[16];
  for (size_t c = 0; c < f.num_clauses(); ++c) {
    for (int lit : f.clause(c)) {
      char* end = tmp + sizeof(tmp);
      char* p = end;
      unsigned v = lit < 0 ? static_cast<unsigned>(-lit) : static_cast<unsigned>(lit);
      do {
        *--p = static_cast<char>('0' + v % 10);
        v /= 10;
      } while (v);
      if (lit < 0) *--p = '-';
      buf.append(p, end);
      buf.push_back(' ');
    }
    buf += "0\n";
    if (buf.size() > (1 << 15)) {
      os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string emit_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  emit_dimacs(f, os);
  return os.str();
}

CnfFormula parse_dimacs(std::istream& is) {
  CnfFormula f;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<int> clause;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (!header_seen) {
      std::string p, cnf;
      int vars = 0;
      long clauses = 0;
      if (!(ls >> p >> cnf >> vars >> clauses) || p != "p" || cnf != "cnf")
        throw ParseError("dimacs line " + std::to_string(line_no) + ": expected 'p cnf <vars> <clauses>'");
      f.ensure_vars(vars);
      header_seen = true;
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (clause.empty())
          throw ParseError("dimacs line " + std::to_string(line_no) + ": empty clause");
        f.add_clause(clause);
        clause.clear();
      } else {
        if (std::abs(lit) > f.num_vars())
          throw ParseError("dimacs line " + std::to_string(line_no) + ": literal " +
                           std::to_string(lit) + " exceeds declared variable count");
        clause.push_back(lit);
      }
    }
    if (!ls.eof())
      throw ParseError("dimacs line " + std::to_string(line_no) + ": unexpected token");
  }
  if (!header_seen) throw ParseError("dimacs input has no header");
  if (!clause.empty()) {
    f.add_clause(clause);
  }
  return f;
}

}  // namespace ssc
