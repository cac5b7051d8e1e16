// CNF encoding of a strategy-solvable-clues instance: a bounded unrolling of
// the transition relation over one-hot placement variables and Boolean
// candidate variables, with auxiliary condition variables defined by both
// biconditional directions so that models are exactly the reachable
// trajectories.
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ssc/cnf.hpp"
#include "ssc/grid.hpp"

namespace ssc {

// Hard ceiling for the unrolling depth (the step bound on a 9x9 board;
// larger boards get their own bound).
inline int max_unroll(const Dims& dims) {
  const int theorem = dims.N * dims.N * (dims.N - 1) + 1;
  return theorem < 649 ? 649 : theorem;
}

struct EncodeOptions {
  int K = 30;
  StrategySet strategies = StrategySet::all();
  bool clue_reduction = true;
  bool completion_probe = true;   // consumed by the search driver
  std::optional<int> theta;       // min-clue mode: drop the mask, bound the clue count
  std::optional<ClueAssignment> fixed_digits;  // pin step-0 digits (equivalence testing)
};

// Variable ids for placements (x: cell, value 0..N, step), candidates
// (y: cell, digit 1..N, step) and min-clue indicators (u: cell).  With the
// clue-cell reduction, x/y ids of clue cells at steps >= 1 alias their step-0
// ids.  Condition variables are allocated past reserved() during encoding.
class VarMap {
 public:
  VarMap(const Dims& dims, int K, const ClueMask* mask, bool clue_reduction, bool minclue);

  int x(int cell, int value, int step) const {
    return x_base_[static_cast<size_t>(step) * cells_ + cell] + value;
  }
  int y(int cell, Digit digit, int step) const {
    return y_base_[static_cast<size_t>(step) * cells_ + cell] + digit - 1;
  }
  int u(int cell) const {
    SSC_ASSERT(minclue_);
    return u_base_ + cell;
  }

  const Dims& dims() const { return dims_; }
  int K() const { return K_; }
  bool minclue() const { return minclue_; }
  bool reduced() const { return reduced_; }
  bool is_clue(int cell) const { return !minclue_ && clue_[cell] != 0; }
  bool aliased(int cell, int step) const { return step > 0 && reduced_ && is_clue(cell); }

  int reserved() const { return reserved_; }
  int x_count() const { return x_count_; }  // distinct x ids
  int y_count() const { return y_count_; }

  // literals asserting a complete grid at the given step
  std::vector<int> completion_assumptions(int step) const;

  // "kind cell digit step id" lines (kinds x, y, u)
  void write_sidecar(std::ostream& os) const;

 private:
  Dims dims_;
  int K_;
  int cells_;
  bool reduced_;
  bool minclue_;
  std::vector<uint8_t> clue_;
  std::vector<int> x_base_;
  std::vector<int> y_base_;
  int u_base_ = 0;
  int reserved_ = 0;
  int x_count_ = 0;
  int y_count_ = 0;
};

struct EncodeStats {
  int64_t z_persist_place = 0;   // placements carried from the previous step
  int64_t z_persist_remove = 0;  // removals carried from the previous step
  int64_t z_naked = 0;
  int64_t z_hidden = 0;
  int64_t z_s2_own = 0;
  int64_t z_s2_peer = 0;
  int64_t z_locked = 0;
  int64_t stability = 0;  // per-candidate stability literals
  int64_t stable_steps = 0;
  int64_t counter = 0;  // cardinality counter literals
};

struct EncodedInstance {
  CnfFormula formula;
  VarMap varmap;
  EncodeStats stats;
};

// Emits the sub-encodings; encode_instance drives a full build but the
// passes can be run individually.
class InstanceEncoder {
 public:
  InstanceEncoder(const ClueMask& mask, const EncodeOptions& options, const Dims& dims);

  void encode_one_hot(int step);
  void encode_initial();
  void encode_placement_rules(int step);  // step >= 1
  void encode_removal_rules(int step);    // step >= 0
  void encode_state_conditions(int step);
  void encode_progress_filter(int step);  // step >= 1
  void encode_cardinality(int theta);

  void build();

  const VarMap& varmap() const { return varmap_; }
  const CnfFormula& formula() const { return formula_; }
  const EncodeStats& stats() const { return stats_; }
  EncodedInstance take() && {
    return {std::move(formula_), std::move(varmap_), stats_};
  }

 private:
  const Dims dims_;
  const Geometry& geo_;
  const EncodeOptions options_;
  ClueMask mask_;
  VarMap varmap_;
  CnfFormula formula_;
  EncodeStats stats_;
  std::vector<std::vector<int>> cell_pairs_;  // per cell: locked pairs with cell in B \ A
  std::vector<uint8_t> pair_used_;
  std::vector<int> z_locked_scratch_;  // per (pair, digit) ids for the current step
  int z_locked_step_ = -1;

  bool transition_cell(int cell) const { return !varmap_.aliased(cell, 1); }
  void define_and(int lhs_lit, std::span<const int> rhs);
  void define_or(int lhs_lit, std::span<const int> rhs);
  void ensure_locked_defs(int step);
};

EncodedInstance encode_instance(const ClueMask& mask, const EncodeOptions& options,
                                const Dims& dims);

struct DecodedTrajectory {
  ClueAssignment clues;
  std::vector<GridState> states;  // steps 0..K
};

// Throws InternalError when the model violates the one-hot constraints.
DecodedTrajectory decode_model(const Model& model, const VarMap& vm);

bool model_complete_at(const Model& model, const VarMap& vm, int step);

}  // namespace ssc
