#include "ssc/engine.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace ssc {

const char* to_string(PlacementVia v) {
  switch (v) {
    case PlacementVia::clue: return "clue";
    case PlacementVia::naked_single: return "naked_single";
    case PlacementVia::hidden_single: return "hidden_single";
  }
  return "?";
}

const char* to_string(RemovalCause c) {
  return c == RemovalCause::s2 ? "s2" : "locked_candidate";
}

const char* to_string(SolveResult::Kind k) {
  switch (k) {
    case SolveResult::Kind::solved: return "SOLVED";
    case SolveResult::Kind::stuck: return "STUCK";
    case SolveResult::Kind::contradiction: return "CONTRADICTION";
  }
  return "?";
}

namespace {

// Digits deduced for every cell from the source state, with the strategy kept
// for reporting.  Mirrors the placement rules: persistence plus the enabled
// strategy conditions, all read from the previous step's candidates.
struct Deduced {
  std::vector<CandSet> digits;      // per cell: deduced digit set
  std::vector<CandSet> via_naked;   // subset from the naked condition
  std::vector<CandSet> via_hidden;  // subset from a hidden condition
};

Deduced deduce_placements(const GridState& q, const StrategySet& strategies,
                          const Geometry& geo) {
  const int M = q.dims.cells();
  Deduced d;
  d.digits.assign(M, 0);
  d.via_naked.assign(M, 0);
  d.via_hidden.assign(M, 0);
  for (int idx = 0; idx < M; ++idx)
    if (q.f[idx] != 0) d.digits[idx] |= cand_bit(q.f[idx]);
  if (strategies.naked_single) {
    for (int idx = 0; idx < M; ++idx) {
      // all digits but one ruled out; empty sets never enter a step
      if ((q.g[idx] & (q.g[idx] - 1)) == 0 && q.g[idx] != 0) {
        d.digits[idx] |= q.g[idx];
        d.via_naked[idx] |= q.g[idx];
      }
    }
  }
  if (strategies.hidden_single) {
    const CandSet full = cand_full(q.dims.N);
    for (const auto& cells : geo.group_cells) {
      CandSet seen_once = 0, seen_twice = 0;
      for (int idx : cells) {
        seen_twice |= seen_once & q.g[idx];
        seen_once |= q.g[idx];
      }
      const CandSet unique = seen_once & ~seen_twice;
      if (unique) {
        for (int idx : cells) {
          const CandSet hit = unique & q.g[idx];
          d.digits[idx] |= hit;
          d.via_hidden[idx] |= hit;
        }
      }
      // A digit absent from the whole group satisfies the condition at every
      // cell of the group.
      const CandSet absent = full & ~seen_once;
      if (absent) {
        for (int idx : cells) {
          d.digits[idx] |= absent;
          d.via_hidden[idx] |= absent;
        }
      }
    }
  }
  return d;
}

// Removal sets justified by a locked pair in the source state.
std::vector<CandSet> deduce_locked_removals(const GridState& q, const Geometry& geo) {
  const CandSet full = cand_full(q.dims.N);
  std::vector<CandSet> removal(q.dims.cells(), 0);
  for (const auto& pair : geo.pairs) {
    CandSet present = 0;
    for (int idx : pair.a_minus_b) present |= q.g[idx];
    const CandSet absent = full & ~present;
    if (!absent) continue;
    for (int idx : pair.b_minus_a) removal[idx] |= absent;
  }
  return removal;
}

}  // namespace

StepOutcome step(const GridState& q, const StrategySet& strategies, const Dims& dims) {
  const auto& geo = Geometry::of(dims);
  const int M = dims.cells(), N = dims.N;
  StepOutcome out{StepOutcome::Kind::progress, GridState(dims), {}, {}, {}};

  const Deduced deduced = deduce_placements(q, strategies, geo);
  const std::vector<CandSet> locked =
      strategies.locked_candidate ? deduce_locked_removals(q, geo)
                                  : std::vector<CandSet>(M, 0);

  GridState& next = out.next;
  for (int idx = 0; idx < M; ++idx) {
    const CandSet set = deduced.digits[idx];
    if (set == 0) {
      next.f[idx] = 0;
      continue;
    }
    if ((set & (set - 1)) != 0) {
      out.kind = StepOutcome::Kind::contradiction;
      out.where = {idx / N, idx % N};
      std::ostringstream os;
      os << "two distinct digits deduced at " << to_string(out.where) << ":";
      for (Digit n = 1; n <= N; ++n)
        if (cand_has(set, n)) os << ' ' << n;
      out.reason = os.str();
      out.next = q;
      return out;
    }
    next.f[idx] = cand_single(set);
  }

  // g: previous candidates minus locked-candidate removals (previous step)
  // minus S2 removals induced by the new placements (same step).
  next.g = q.g;
  for (int idx = 0; idx < M; ++idx) next.g[idx] &= ~locked[idx];
  for (int idx = 0; idx < M; ++idx) {
    const Digit n = next.f[idx];
    if (n == 0) continue;
    next.g[idx] &= cand_bit(n);
    for (int peer : geo.peers[idx]) next.g[peer] &= ~cand_bit(n);
  }

  for (int idx = 0; idx < M; ++idx) {
    if (next.g[idx] == 0) {
      out.kind = StepOutcome::Kind::contradiction;
      out.where = {idx / N, idx % N};
      out.reason = "all candidates removed at " + to_string(out.where);
      return out;
    }
  }

  // deduction report: new placements and actual removals only
  for (int idx = 0; idx < M; ++idx) {
    if (q.f[idx] == 0 && next.f[idx] != 0) {
      const PlacementVia via = cand_has(deduced.via_naked[idx], next.f[idx])
                                   ? PlacementVia::naked_single
                                   : PlacementVia::hidden_single;
      out.deductions.placements.push_back({{idx / N, idx % N}, next.f[idx], via});
    }
    CandSet removed = q.g[idx] & ~next.g[idx];
    while (removed) {
      const Digit n = std::countr_zero(removed) + 1;
      removed &= removed - 1;
      // S2 takes labeling precedence when it coincides with a locked-candidate removal.
      bool s2 = next.f[idx] != 0 && next.f[idx] != n;
      if (!s2)
        for (int peer : geo.peers[idx])
          if (next.f[peer] == n) {
            s2 = true;
            break;
          }
      out.deductions.removals.push_back(
          {{idx / N, idx % N}, n, s2 ? RemovalCause::s2 : RemovalCause::locked_candidate});
    }
  }

  if (next.g == q.g) out.kind = StepOutcome::Kind::fixpoint;
  return out;
}

SolveResult closure(const ClueAssignment& clues, const StrategySet& strategies,
                    const Dims& dims, Trace* trace) {
  SSC_ASSERT(strategies.any());
  SolveResult result{SolveResult::Kind::stuck, GridState(dims), 0, {}};
  GridState q = make_initial_state_unchecked(clues);
  if (trace) {
    trace->states.clear();
    trace->steps.clear();
    trace->states.push_back(q);
  }
  for (int idx = 0; idx < dims.cells(); ++idx) {
    if (q.g[idx] == 0) {
      result.kind = SolveResult::Kind::contradiction;
      result.state = q;
      result.steps = 0;
      result.reason = "inconsistent clues: all candidates removed at " +
                      to_string(Cell{idx / dims.N, idx % dims.N});
      return result;
    }
  }
  if (is_complete(q)) {
    SSC_ASSERT(is_valid_solution(q));
    return {SolveResult::Kind::solved, std::move(q), 0, {}};
  }

  const int bound = step_bound(dims);
  for (int k = 1;; ++k) {
    SSC_ASSERT(k <= bound);
    StepOutcome s = step(q, strategies, dims);
    if (s.kind == StepOutcome::Kind::contradiction) {
      result.kind = SolveResult::Kind::contradiction;
      result.state = std::move(q);
      result.steps = k;
      result.reason = s.reason;
      return result;
    }
    if (trace) {
      trace->states.push_back(s.next);
      trace->steps.push_back(std::move(s.deductions));
    }
    const bool fix = s.kind == StepOutcome::Kind::fixpoint;
    q = std::move(s.next);
    if (is_complete(q)) {
      SSC_ASSERT(is_valid_solution(q));
      return {SolveResult::Kind::solved, std::move(q), k, {}};
    }
    if (fix) return {SolveResult::Kind::stuck, std::move(q), k, {}};
  }
}

bool is_strategy_solvable(const ClueAssignment& clues, const StrategySet& strategies,
                          const Dims& dims) {
  return closure(clues, strategies, dims).solved();
}

std::vector<std::pair<Cell, Digit>> naked_single_placements(const GridState& q,
                                                            const Dims& dims) {
  std::vector<std::pair<Cell, Digit>> out;
  for (int idx = 0; idx < dims.cells(); ++idx)
    if (q.f[idx] == 0 && cand_count(q.g[idx]) == 1)
      out.push_back({{idx / dims.N, idx % dims.N}, cand_single(q.g[idx])});
  return out;
}

std::vector<std::pair<Cell, Digit>> hidden_single_placements(const GridState& q,
                                                             const Dims& dims) {
  const auto& geo = Geometry::of(dims);
  std::vector<CandSet> hits(dims.cells(), 0);
  for (const auto& cells : geo.group_cells) {
    CandSet seen_once = 0, seen_twice = 0;
    for (int idx : cells) {
      seen_twice |= seen_once & q.g[idx];
      seen_once |= q.g[idx];
    }
    const CandSet unique = seen_once & ~seen_twice;
    for (int idx : cells) hits[idx] |= unique & q.g[idx];
  }
  std::vector<std::pair<Cell, Digit>> out;
  for (int idx = 0; idx < dims.cells(); ++idx) {
    if (q.f[idx] != 0) continue;
    CandSet set = hits[idx];
    while (set) {
      const Digit n = std::countr_zero(set) + 1;
      set &= set - 1;
      out.push_back({{idx / dims.N, idx % dims.N}, n});
    }
  }
  return out;
}

std::vector<std::pair<Cell, Digit>> locked_candidate_removals(const GridState& q,
                                                              const Dims& dims) {
  const auto& geo = Geometry::of(dims);
  const auto removal = [&] {
    std::vector<CandSet> r(dims.cells(), 0);
    const CandSet full = cand_full(dims.N);
    for (const auto& pair : geo.pairs) {
      CandSet present = 0;
      for (int idx : pair.a_minus_b) present |= q.g[idx];
      const CandSet absent = full & ~present;
      if (!absent) continue;
      for (int idx : pair.b_minus_a) r[idx] |= absent & q.g[idx];
    }
    return r;
  }();
  std::vector<std::pair<Cell, Digit>> out;
  for (int idx = 0; idx < dims.cells(); ++idx) {
    CandSet set = removal[idx];
    while (set) {
      const Digit n = std::countr_zero(set) + 1;
      set &= set - 1;
      out.push_back({{idx / dims.N, idx % dims.N}, n});
    }
  }
  return out;
}

std::string Trace::to_text() const {
  std::ostringstream os;
  for (size_t k = 0; k < steps.size(); ++k) {
    os << "step " << (k + 1) << '\n';
    for (const Placement& p : steps[k].placements)
      os << (k + 1) << ' ' << p.cell.i << ' ' << p.cell.j << ' ' << p.digit << ' '
         << to_string(p.via) << '\n';
    for (const Removal& r : steps[k].removals)
      os << (k + 1) << ' ' << r.cell.i << ' ' << r.cell.j << ' ' << r.digit << ' '
         << to_string(r.cause) << '\n';
  }
  return os.str();
}

}  // namespace ssc
