// Pluggable satisfiability backend: the in-process solver plus an
// external-process fallback speaking DIMACS.  Every Sat model is re-checked
// against the formula before it is handed out.
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssc/cnf.hpp"

namespace ssc {

struct SolverVerdict {
  enum class Kind { sat, unsat, timeout };
  Kind kind = Kind::unsat;
  Model model;  // covers every variable id when kind == sat
  double elapsed_s = 0.0;

  bool sat() const { return kind == Kind::sat; }
};

struct SolverConfig {
  enum class Backend { in_process, external };
  Backend backend = Backend::in_process;
  std::string external_path;       // solver executable, invoked with the CNF path
  double time_limit_s = 600.0;
  int64_t conflict_budget = -1;    // in-process only; < 0 = unlimited
  std::vector<int> assumptions;    // optional literals
};

// One-shot decision.  External backends get assumptions lowered to unit
// clauses on a copy of the formula.
SolverVerdict solve(const CnfFormula& formula, const SolverConfig& config);

// Model text: "SAT"/"UNSAT" or "s SATISFIABLE"-style status plus v-lines of
// signed ids; 'c' lines ignored.  Throws ParseError with a line number.
SolverVerdict parse_model_text(const std::string& text, int num_vars);

// Loads the formula once and answers repeated assumption queries; the
// in-process backend keeps its learnt clauses between calls.
class SolverSession {
 public:
  SolverSession(const CnfFormula& formula, const SolverConfig& config);
  ~SolverSession();
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  // time_limit_s overrides the configured per-call limit when set.
  SolverVerdict solve_with(std::span<const int> assumptions,
                           std::optional<double> time_limit_s = std::nullopt);

 private:
  const CnfFormula& formula_;
  SolverConfig config_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ssc
