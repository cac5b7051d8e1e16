// Standalone DIMACS front end for the in-process solver; doubles as the
// external backend in the differential tests.
#include <fstream>
#include <iostream>

#include "ssc/cnf.hpp"
#include "ssc/solver.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: ssc-sat <file.cnf>\n";
    return 2;
  }
  try {
    std::ifstream in(argv[1]);
    if (!in) {
      std::cerr << "cannot open " << argv[1] << '\n';
      return 2;
    }
    const ssc::CnfFormula f = ssc::parse_dimacs(in);
    ssc::CdclSolver solver;
    solver.ensure_vars(f.num_vars());
    for (size_t c = 0; c < f.num_clauses(); ++c) {
      auto cl = f.clause(c);
      if (!solver.add_clause(std::span<const int>(cl.data(), cl.size()))) break;
    }
    const auto result = solver.solve();
    const auto& st = solver.stats();
    std::cerr << "c conflicts=" << st.conflicts << " decisions=" << st.decisions
              << " propagations=" << st.propagations << " restarts=" << st.restarts << '\n';
    switch (result) {
      case ssc::CdclSolver::Result::unsat:
        std::cout << "s UNSATISFIABLE\n";
        return 20;
      case ssc::CdclSolver::Result::unknown:
        std::cout << "s UNKNOWN\n";
        return 0;
      case ssc::CdclSolver::Result::sat:
        break;
    }
    std::cout << "s SATISFIABLE\n";
    std::string line = "v";
    for (int v = 1; v <= f.num_vars(); ++v) {
      line += ' ';
      if (!solver.model_value(v)) line += '-';
      line += std::to_string(v);
      if (line.size() > 72) {
        std::cout << line << '\n';
        line = "v";
      }
    }
    line += " 0";
    std::cout << line << '\n';
    return 10;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
