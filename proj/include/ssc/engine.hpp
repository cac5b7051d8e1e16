// Deterministic forward simulation of the state transition relation:
// one transition applies every enabled deduction readable from the previous
// step, so the engine and the CNF encoding stay bisimilar.
#pragma once

#include <string>
#include <vector>

#include "ssc/grid.hpp"

namespace ssc {

// Upper bound on strict candidate-set changes plus the stall step;
// 649 on a 9x9 board.
inline int step_bound(const Dims& dims) {
  return dims.N * dims.N * (dims.N - 1) + 1;
}

enum class PlacementVia { clue, naked_single, hidden_single };
enum class RemovalCause { s2, locked_candidate };

const char* to_string(PlacementVia v);
const char* to_string(RemovalCause c);

struct Placement {
  Cell cell;
  Digit digit = 0;
  PlacementVia via = PlacementVia::naked_single;
};

struct Removal {
  Cell cell;
  Digit digit = 0;
  RemovalCause cause = RemovalCause::s2;
};

// What changed in one transition: placements only on previously empty cells,
// removals only of previously present candidates.
struct StepDeductions {
  std::vector<Placement> placements;
  std::vector<Removal> removals;
};

struct StepOutcome {
  enum class Kind { progress, fixpoint, contradiction };
  Kind kind = Kind::progress;
  GridState next;
  StepDeductions deductions;
  // contradiction details
  Cell where{};
  std::string reason;
};

// One transition: f gains every placement deducible from the previous
// candidates (persistence, naked singles, hidden singles as enabled);
// g loses the S2 removals induced by the new placements (same step) and the
// enabled locked-candidate removals read from the previous step.
StepOutcome step(const GridState& q, const StrategySet& strategies, const Dims& dims);

struct SolveResult {
  enum class Kind { solved, stuck, contradiction };
  Kind kind = Kind::stuck;
  GridState state;   // final state (last consistent state on contradiction)
  int steps = 0;     // transitions taken; the failing step on contradiction
  std::string reason;

  bool solved() const { return kind == Kind::solved; }
};

const char* to_string(SolveResult::Kind k);

// q_0..q_k plus the per-step deductions; q_0 is the initial state.
struct Trace {
  std::vector<GridState> states;
  std::vector<StepDeductions> steps;
  // Line-oriented export: "step <k>" headers, then "k i j n naked_single"
  // style placement lines and "k i j n s2" style removal lines.
  std::string to_text() const;
};

SolveResult closure(const ClueAssignment& clues, const StrategySet& strategies,
                    const Dims& dims, Trace* trace = nullptr);

bool is_strategy_solvable(const ClueAssignment& clues, const StrategySet& strategies,
                          const Dims& dims);

// Strategy views over a single state (set semantics, sorted output).
std::vector<std::pair<Cell, Digit>> naked_single_placements(const GridState& q,
                                                            const Dims& dims);
std::vector<std::pair<Cell, Digit>> hidden_single_placements(const GridState& q,
                                                             const Dims& dims);
std::vector<std::pair<Cell, Digit>> locked_candidate_removals(const GridState& q,
                                                              const Dims& dims);

}  // namespace ssc
