#include "ssc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <sstream>
#include <thread>

#include "ssc/rng.hpp"

namespace ssc {

namespace {

// Enumeration work counter shared by nodes and leaves.
struct Budget {
  int64_t left;
  void spend() {
    if (--left < 0)
      throw CapExceeded("enumeration cap exceeded; use the exact method instead");
  }
};

}  // namespace

std::optional<ClueAssignment> brute_force_solvable(const ClueMask& mask,
                                                   const StrategySet& strategies,
                                                   int64_t cap) {
  SSC_ASSERT(strategies.any());
  const Dims dims = mask.dims;
  const auto& geo = Geometry::of(dims);
  const std::vector<Cell> cells = mask.cells();
  Budget budget{cap};
  ClueAssignment current(dims);
  // per-group used-digit masks for prefix consistency
  std::vector<CandSet> used(geo.group_cells.size(), 0);

  std::function<std::optional<ClueAssignment>(size_t)> walk =
      [&](size_t pos) -> std::optional<ClueAssignment> {
    if (pos == cells.size()) {
      budget.spend();
      if (closure(current, strategies, dims).solved()) return current;
      return std::nullopt;
    }
    const Cell c = cells[pos];
    const int idx = dims.cell_index(c.i, c.j);
    for (Digit n = 1; n <= dims.N; ++n) {
      budget.spend();
      const CandSet bit = cand_bit(n);
      bool clash = false;
      for (int gi : geo.cell_groups[idx])
        if (used[gi] & bit) {
          clash = true;
          break;
        }
      if (clash) continue;  // duplicate in a group can never become solvable
      current.values[idx] = n;
      for (int gi : geo.cell_groups[idx]) used[gi] |= bit;
      if (auto found = walk(pos + 1)) return found;
      for (int gi : geo.cell_groups[idx]) used[gi] &= ~bit;
      current.values[idx] = 0;
    }
    return std::nullopt;
  };
  return walk(0);
}

namespace {

// Minimum-remaining-values backtracking over rule-consistent completions.
struct SolutionCounter {
  const Dims dims;
  const Geometry& geo;
  std::vector<CandSet> avail;  // per cell, derived from group masks
  std::vector<Digit> grid;
  int64_t limit;
  int64_t count = 0;

  SolutionCounter(const ClueAssignment& clues, int64_t lim)
      : dims(clues.dims), geo(Geometry::of(clues.dims)), grid(clues.values), limit(lim) {}

  bool prepare(std::vector<CandSet>& group_used) {
    group_used.assign(geo.group_cells.size(), 0);
    for (int idx = 0; idx < dims.cells(); ++idx) {
      const Digit n = grid[idx];
      if (n == 0) continue;
      const CandSet bit = cand_bit(n);
      for (int gi : geo.cell_groups[idx]) {
        if (group_used[gi] & bit) return false;  // direct rule violation
        group_used[gi] |= bit;
      }
    }
    return true;
  }

  void run() {
    std::vector<CandSet> group_used;
    if (!prepare(group_used)) return;
    descend(group_used);
  }

  void descend(std::vector<CandSet>& group_used) {
    if (count >= limit) return;
    int best = -1;
    int best_count = dims.N + 1;
    CandSet best_set = 0;
    for (int idx = 0; idx < dims.cells(); ++idx) {
      if (grid[idx] != 0) continue;
      CandSet set = cand_full(dims.N);
      for (int gi : geo.cell_groups[idx]) set &= ~group_used[gi];
      const int c = cand_count(set);
      if (c == 0) return;  // dead branch
      if (c < best_count) {
        best = idx;
        best_count = c;
        best_set = set;
        if (c == 1) break;
      }
    }
    if (best < 0) {
      ++count;
      return;
    }
    CandSet set = best_set;
    while (set && count < limit) {
      const Digit n = std::countr_zero(set) + 1;
      set &= set - 1;
      const CandSet bit = cand_bit(n);
      grid[best] = n;
      for (int gi : geo.cell_groups[best]) group_used[gi] |= bit;
      descend(group_used);
      for (int gi : geo.cell_groups[best]) group_used[gi] &= ~bit;
      grid[best] = 0;
    }
  }
};

}  // namespace

int64_t count_solutions(const ClueAssignment& clues, int64_t limit) {
  SSC_ASSERT(limit >= 1);
  SolutionCounter counter(clues, limit);
  counter.run();
  return counter.count;
}

std::optional<ClueAssignment> generate_and_test(const ClueMask& mask,
                                                const StrategySet& strategies,
                                                int64_t max_trials, uint64_t seed,
                                                TrialLog* log) {
  SSC_ASSERT(max_trials >= 1);
  const Dims dims = mask.dims;
  const std::vector<Cell> cells = mask.cells();
  Rng rng(seed);
  if (log) {
    *log = TrialLog{};
    log->seed = seed;
  }
  for (int64_t t = 0; t < max_trials; ++t) {
    ClueAssignment trial(dims);
    for (const Cell& c : cells) trial.set(c, rng.range(1, dims.N));
    const bool ok = closure(trial, strategies, dims).solved();
    if (log) {
      ++log->trials;
      log->outcomes.push_back(ok);
      if (ok) ++log->successes;
    }
    if (ok) return trial;
  }
  return std::nullopt;
}

CollectionStats classify_lines(const std::vector<std::string>& lines,
                               const StrategySet& strategies, const Dims& dims, int jobs) {
  CollectionStats stats;
  struct Item {
    int line_no;
    ClueAssignment clues;
  };
  std::vector<Item> items;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string stripped = lines[i];
    if (stripped.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (stripped[0] == '#') continue;
    try {
      items.push_back({static_cast<int>(i + 1), parse_grid(stripped, dims)});
    } catch (const ParseError& e) {
      stats.parse_errors.push_back({static_cast<int>(i + 1), e.what()});
    }
  }
  stats.total = static_cast<int64_t>(items.size());
  stats.verdicts.assign(items.size(), 0);
  jobs = std::max(1, jobs);
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= items.size()) return;
      stats.verdicts[i] = closure(items[i].clues, strategies, dims).solved();
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (uint8_t v : stats.verdicts) stats.solvable += v;
  return stats;
}

CollectionStats classify_collection(const std::string& path, const StrategySet& strategies,
                                    const Dims& dims, int jobs) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open collection file " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return classify_lines(lines, strategies, dims, jobs);
}

MaskEnumerator::MaskEnumerator(const Dims& dims, int size, int64_t cap)
    : dims_(dims), size_(size) {
  SSC_ASSERT(size >= 0 && size <= dims.cells());
  // C(cells, size) within the cap
  long double total = 1;
  for (int i = 0; i < size; ++i) total = total * (dims.cells() - i) / (i + 1);
  if (total > static_cast<long double>(cap))
    throw CapExceeded("mask enumeration would produce " + std::to_string(static_cast<double>(total)) +
                      " masks, over the cap");
  combo_.resize(size);
  for (int i = 0; i < size; ++i) combo_[i] = i;
}

std::optional<ClueMask> MaskEnumerator::next() {
  if (done_) return std::nullopt;
  if (!first_) {
    // next lexicographic combination
    const int M = dims_.cells();
    int i = size_ - 1;
    while (i >= 0 && combo_[i] == M - size_ + i) --i;
    if (i < 0) {
      done_ = true;
      return std::nullopt;
    }
    ++combo_[i];
    for (int j = i + 1; j < size_; ++j) combo_[j] = combo_[j - 1] + 1;
  }
  first_ = false;
  if (size_ == 0) done_ = true;
  ClueMask mask(dims_);
  for (int idx : combo_) mask.flags[idx] = 1;
  return mask;
}

std::vector<ClueMask> enumerate_masks(const Dims& dims, int size, int64_t cap) {
  MaskEnumerator en(dims, size, cap);
  std::vector<ClueMask> out;
  while (auto m = en.next()) out.push_back(std::move(*m));
  return out;
}

std::vector<ClueMask> random_masks(const Dims& dims, int count, int min_clues, int max_clues,
                                   uint64_t seed) {
  SSC_ASSERT(0 <= min_clues && min_clues <= max_clues && max_clues <= dims.cells());
  Rng rng(seed);
  std::vector<ClueMask> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int size = rng.range(min_clues, max_clues);
    ClueMask mask(dims);
    for (int idx : rng.sample(dims.cells(), size)) mask.flags[idx] = 1;
    out.push_back(std::move(mask));
  }
  return out;
}

namespace {

bool fill_solution(std::vector<Digit>& grid, std::vector<CandSet>& group_used, int idx,
                   const Geometry& geo, const Dims& dims, Rng& rng) {
  if (idx == dims.cells()) return true;
  CandSet set = cand_full(dims.N);
  for (int gi : geo.cell_groups[idx]) set &= ~group_used[gi];
  std::vector<Digit> order;
  while (set) {
    const Digit n = std::countr_zero(set) + 1;
    set &= set - 1;
    order.push_back(n);
  }
  rng.shuffle(order);
  for (Digit n : order) {
    const CandSet bit = cand_bit(n);
    grid[idx] = n;
    for (int gi : geo.cell_groups[idx]) group_used[gi] |= bit;
    if (fill_solution(grid, group_used, idx + 1, geo, dims, rng)) return true;
    for (int gi : geo.cell_groups[idx]) group_used[gi] &= ~bit;
    grid[idx] = 0;
  }
  return false;
}

}  // namespace

ClueAssignment random_solution(const Dims& dims, uint64_t seed) {
  const auto& geo = Geometry::of(dims);
  Rng rng(seed);
  ClueAssignment out(dims);
  std::vector<CandSet> group_used(geo.group_cells.size(), 0);
  const bool ok = fill_solution(out.values, group_used, 0, geo, dims, rng);
  SSC_ASSERT(ok);
  return out;
}

std::string format_stats(const CollectionStats& stats, const StrategySet& strategies) {
  std::ostringstream os;
  os << "strategies: " << strategies.to_string() << '\n';
  os << "total: " << stats.total << '\n';
  os << "solvable: " << stats.solvable << '\n';
  os << "parse_errors: " << stats.parse_errors.size() << '\n';
  return os.str();
}

}  // namespace ssc
