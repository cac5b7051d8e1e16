// Independent verification and baselines: exhaustive assignment enumeration,
// a backtracking solution counter, the generate-and-test baseline, and
// collection classification.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssc/engine.hpp"
#include "ssc/grid.hpp"

namespace ssc {

struct CapExceeded : Error {
  using Error::Error;
};

inline constexpr int64_t kDefaultEnumerationCap = 10'000'000;

// Lexicographic enumeration of digit assignments to the mask, pruning
// prefixes with a duplicate digit in a group (those can never close to a
// solved state); returns the first assignment whose closure is Solved.
// Throws CapExceeded once the enumeration budget is spent.
std::optional<ClueAssignment> brute_force_solvable(const ClueMask& mask,
                                                   const StrategySet& strategies,
                                                   int64_t cap = kDefaultEnumerationCap);

// Backtracking count of completions under the one-digit-per-group rules,
// stopping at `limit`.
int64_t count_solutions(const ClueAssignment& clues,
                        int64_t limit = 2);

struct TrialLog {
  int64_t trials = 0;
  int64_t successes = 0;
  uint64_t seed = 0;
  std::vector<uint8_t> outcomes;  // per trial: 1 = closure solved
};

// Uniform random digits per mask cell, tested by engine closure; stops at the
// first success or after max_trials.  Deterministic under a fixed seed.
std::optional<ClueAssignment> generate_and_test(const ClueMask& mask,
                                                const StrategySet& strategies,
                                                int64_t max_trials, uint64_t seed,
                                                TrialLog* log = nullptr);

struct CollectionStats {
  int64_t total = 0;
  int64_t solvable = 0;
  std::vector<uint8_t> verdicts;  // per parsed grid, in input order
  std::vector<std::pair<int, std::string>> parse_errors;  // line number, message
};

// One grid per line (compact or dotted); parse errors are collected, not fatal.
CollectionStats classify_collection(const std::string& path, const StrategySet& strategies,
                                    const Dims& dims, int jobs = 1);
CollectionStats classify_lines(const std::vector<std::string>& lines,
                               const StrategySet& strategies, const Dims& dims, int jobs = 1);

// All C(N*N, size) masks, each exactly once, lexicographic by cell index.
class MaskEnumerator {
 public:
  MaskEnumerator(const Dims& dims, int size, int64_t cap = kDefaultEnumerationCap);
  std::optional<ClueMask> next();

 private:
  Dims dims_;
  int size_;
  std::vector<int> combo_;
  bool done_ = false;
  bool first_ = true;
};

std::vector<ClueMask> enumerate_masks(const Dims& dims, int size,
                                      int64_t cap = kDefaultEnumerationCap);

// Masks with uniform size in [min_clues, max_clues] and uniform distinct
// cells; deterministic under a fixed seed.
std::vector<ClueMask> random_masks(const Dims& dims, int count, int min_clues,
                                   int max_clues, uint64_t seed);

// Uniformly seeded complete solution grid (randomized backtracking fill);
// test and benchmark feedstock.
ClueAssignment random_solution(const Dims& dims, uint64_t seed);

std::string format_stats(const CollectionStats& stats, const StrategySet& strategies);

}  // namespace ssc
