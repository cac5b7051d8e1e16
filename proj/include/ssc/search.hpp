// Exact decision procedures: incremental-depth clue search and the
// min-clue threshold descent.
#pragma once

#include <limits>
#include <optional>
#include <string>

#include "ssc/encoder.hpp"
#include "ssc/engine.hpp"
#include "ssc/sat_adapter.hpp"

namespace ssc {

struct SearchOptions {
  int K_min = 30;
  int K_max = 649;
  StrategySet strategies = StrategySet::all();
  bool clue_reduction = true;
  // Solve first under the assumption that the step-K grid is complete;
  // turning this off follows the plain incremental loop literally.
  bool completion_probe = true;
  double global_budget_s = std::numeric_limits<double>::infinity();
};

struct SearchOutcome {
  enum class Kind { clues, unsolvable, unknown };
  enum class UnknownReason { timeout, k_exhausted };

  Kind kind = Kind::unknown;
  ClueAssignment assignment;  // engine-verified when kind == clues
  int K_used = -1;            // depth that decided the instance (last tried otherwise)
  int steps_to_complete = -1;
  UnknownReason unknown_reason = UnknownReason::timeout;
  double wall_ms = 0.0;
};

// Encode-and-solve for K = K_min..K_max.  Unsat is monotone in K, so the
// first Unsat verdict settles the instance; every returned assignment is
// re-verified by the engine before being surfaced.
SearchOutcome find_clues(const ClueMask& mask, const SearchOptions& options,
                         const SolverConfig& solver_config);

struct MinClueReport {
  // Minimum clue count over all positions and digits; -1 if undetermined.
  int theta_star = -1;
  std::optional<ClueAssignment> witness;  // engine-verified, exactly theta_star clues
  int witness_K = -1;
  int witness_steps = -1;
  bool exact = false;   // false when the descent aborted on a timeout
  int unsat_theta = -1; // the proof point theta_star - 1 when exact
  double wall_ms = 0.0;
};

// Descend theta one by one from theta_start (default N*N) until the
// threshold-constrained instance becomes unsolvable.
MinClueReport min_clues(const Dims& dims, const SearchOptions& options,
                        const SolverConfig& solver_config, int theta_start = -1);

std::string format_report(const SearchOutcome& outcome);
std::string format_report(const MinClueReport& report);

}  // namespace ssc
