#include <optional>

#include "doctest.h"
#include "ssc/rng.hpp"
#include "ssc/solver.hpp"

using namespace ssc;

namespace {

// exhaustive truth-table check, the reference for small formulas
std::optional<std::vector<bool>> brute_force_sat(int vars,
                                                 const std::vector<std::vector<int>>& clauses) {
  for (uint64_t bits = 0; bits < (uint64_t{1} << vars); ++bits) {
    bool ok = true;
    for (const auto& cl : clauses) {
      bool sat = false;
      for (int lit : cl) {
        const bool v = (bits >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == v) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<bool> model(vars + 1);
      for (int v = 1; v <= vars; ++v) model[v] = (bits >> (v - 1)) & 1;
      return model;
    }
  }
  return std::nullopt;
}

std::vector<std::vector<int>> pigeonhole(int holes) {
  // holes+1 pigeons into `holes` holes; variable p*holes + h + 1
  std::vector<std::vector<int>> clauses;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p <= holes; ++p) {
    std::vector<int> at_least;
    for (int h = 0; h < holes; ++h) at_least.push_back(var(p, h));
    clauses.push_back(at_least);
  }
  for (int h = 0; h < holes; ++h)
    for (int p1 = 0; p1 <= holes; ++p1)
      for (int p2 = p1 + 1; p2 <= holes; ++p2)
        clauses.push_back({-var(p1, h), -var(p2, h)});
  return clauses;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("trivial formulas") {
  {
    CdclSolver s;
    s.add_clause({1});
    CHECK(s.solve() == CdclSolver::Result::sat);
    CHECK(s.model_value(1));
  }
  {
    CdclSolver s;
    s.add_clause({1});
    s.add_clause({-1});
    CHECK(s.solve() == CdclSolver::Result::unsat);
  }
  {
    CdclSolver s;
    s.add_clause({1, 2});
    s.add_clause({-1, 2});
    s.add_clause({1, -2});
    CHECK(s.solve() == CdclSolver::Result::sat);
    CHECK(s.model_value(1));
    CHECK(s.model_value(2));
  }
}

TEST_CASE("pigeonhole instances are refuted") {
  for (int holes : {3, 4, 5, 6}) {
    CdclSolver s;
    for (const auto& cl : pigeonhole(holes)) s.add_clause(cl);
    CHECK(s.solve() == CdclSolver::Result::unsat);
  }
}

TEST_CASE("random 3-SAT agrees with exhaustive search") {
  Rng rng(12345);
  int sat_count = 0, unsat_count = 0;
  for (int t = 0; t < 300; ++t) {
    const int vars = 6 + static_cast<int>(rng.below(10));           // 6..15
    const int clauses = static_cast<int>(vars * (3.0 + rng.below(3)));  // ratio 3..5
    std::vector<std::vector<int>> formula;
    for (int c = 0; c < clauses; ++c) {
      std::vector<int> cl;
      for (int k = 0; k < 3; ++k) {
        const int v = rng.range(1, vars);
        cl.push_back(rng.below(2) ? v : -v);
      }
      formula.push_back(cl);
    }
    CdclSolver s;
    for (const auto& cl : formula) s.add_clause(cl);
    const auto result = s.solve();
    const auto reference = brute_force_sat(vars, formula);
    if (reference) {
      ++sat_count;
      REQUIRE(result == CdclSolver::Result::sat);
      // the solver's own model must satisfy the formula
      for (const auto& cl : formula) {
        bool sat = false;
        for (int lit : cl) sat |= s.model_value(std::abs(lit)) == (lit > 0);
        CHECK(sat);
      }
    } else {
      ++unsat_count;
      REQUIRE(result == CdclSolver::Result::unsat);
    }
  }
  CHECK(sat_count > 20);
  CHECK(unsat_count > 20);
}

TEST_CASE("assumptions restrict without adding clauses") {
  CdclSolver s;
  s.add_clause({1, 2});
  s.add_clause({-1, 3});
  CHECK(s.solve(std::initializer_list<int>{-3}) == CdclSolver::Result::sat);
  CHECK_FALSE(s.model_value(3));
  CHECK_FALSE(s.model_value(1));  // -3 forces -1 forces 2
  CHECK(s.model_value(2));
  // conflicting assumptions are unsat, but only under those assumptions
  CHECK(s.solve(std::initializer_list<int>{-1, -2}) == CdclSolver::Result::unsat);
  CHECK(s.solve() == CdclSolver::Result::sat);
  CHECK(s.solve(std::initializer_list<int>{1, 3}) == CdclSolver::Result::sat);
}

TEST_CASE("assumptions on pigeonhole subinstances stay correct across calls") {
  CdclSolver s;
  // php(4): unsat as a whole; forcing pigeon 0 into hole 0 keeps it unsat
  for (const auto& cl : pigeonhole(4)) s.add_clause(cl);
  CHECK(s.solve(std::initializer_list<int>{1}) == CdclSolver::Result::unsat);
  CHECK(s.solve() == CdclSolver::Result::unsat);
}

TEST_CASE("conflict budget yields unknown") {
  CdclSolver s;
  for (const auto& cl : pigeonhole(6)) s.add_clause(cl);
  CHECK(s.solve({}, -1, 1) == CdclSolver::Result::unknown);
  // and the instance can still be finished afterwards
  CHECK(s.solve() == CdclSolver::Result::unsat);
}

TEST_CASE("duplicate and tautological clauses are tolerated") {
  CdclSolver s;
  s.add_clause({1, 1, 2});
  s.add_clause({1, -1});
  s.add_clause({-2, -2});
  CHECK(s.solve() == CdclSolver::Result::sat);
  CHECK(!s.model_value(2));
  CHECK(s.model_value(1));
}

TEST_CASE("large random satisfiable chains exercise clause reduction") {
  // implication ladders plus random sat 3-cnf; mostly checks stability
  Rng rng(99);
  CdclSolver s;
  const int vars = 2000;
  for (int v = 1; v < vars; ++v) s.add_clause({-v, v + 1});
  // plant a solution: all true; add clauses consistent with it
  for (int c = 0; c < 6000; ++c) {
    std::vector<int> cl;
    const int pos = rng.range(1, vars);
    cl.push_back(pos);
    for (int k = 0; k < 2; ++k) {
      const int v = rng.range(1, vars);
      cl.push_back(rng.below(2) ? v : -v);
    }
    s.add_clause(cl);
  }
  CHECK(s.solve() == CdclSolver::Result::sat);
}

TEST_SUITE_END();
