#include <map>
#include <set>

#include "doctest.h"
#include "ssc/engine.hpp"
#include "ssc/oracle.hpp"
#include "ssc/rng.hpp"

using namespace ssc;

namespace {

// ---------------------------------------------------------------------------
// Reference simulator, written directly from the transition definitions with
// its own geometry and set representation.  Used as the oracle for closure.
// ---------------------------------------------------------------------------
struct NaiveState {
  int N = 0, n = 0;
  std::map<std::pair<int, int>, int> f;
  std::map<std::pair<int, int>, std::set<int>> g;
  bool operator==(const NaiveState&) const = default;
};

std::vector<std::vector<std::pair<int, int>>> naive_groups(int N, int n) {
  std::vector<std::vector<std::pair<int, int>>> gs;
  for (int i = 0; i < N; ++i) {
    std::vector<std::pair<int, int>> row;
    for (int j = 0; j < N; ++j) row.push_back({i, j});
    gs.push_back(row);
  }
  for (int j = 0; j < N; ++j) {
    std::vector<std::pair<int, int>> col;
    for (int i = 0; i < N; ++i) col.push_back({i, j});
    gs.push_back(col);
  }
  for (int bi = 0; bi < N; bi += n)
    for (int bj = 0; bj < N; bj += n) {
      std::vector<std::pair<int, int>> block;
      for (int i = bi; i < bi + n; ++i)
        for (int j = bj; j < bj + n; ++j) block.push_back({i, j});
      gs.push_back(block);
    }
  return gs;
}

NaiveState naive_initial(const ClueAssignment& a) {
  NaiveState q;
  q.N = a.dims.N;
  q.n = a.dims.n;
  const auto gs = naive_groups(q.N, q.n);
  for (int i = 0; i < q.N; ++i)
    for (int j = 0; j < q.N; ++j) {
      q.f[{i, j}] = a.values[a.dims.cell_index(i, j)];
      for (int d = 1; d <= q.N; ++d) q.g[{i, j}].insert(d);
    }
  // rule out exactly what the state conditions force
  for (int i = 0; i < q.N; ++i)
    for (int j = 0; j < q.N; ++j)
      for (int d = 1; d <= q.N; ++d) {
        const int own = q.f[{i, j}];
        bool ruled_out = own != 0 && own != d;
        for (const auto& grp : gs) {
          bool has_me = false;
          for (auto c : grp) has_me |= c == std::pair{i, j};
          if (!has_me) continue;
          for (auto c : grp)
            if (c != std::pair{i, j} && q.f[c] == d) ruled_out = true;
        }
        if (ruled_out) q.g[{i, j}].erase(d);
      }
  return q;
}

struct NaiveResult {
  enum class Kind { solved, stuck, contradiction } kind;
  int steps;
  NaiveState state;
};

NaiveResult naive_closure(const ClueAssignment& a, const StrategySet& strat) {
  NaiveState q = naive_initial(a);
  const auto gs = naive_groups(q.N, q.n);
  auto complete = [&] {
    for (auto& [c, v] : q.f)
      if (v == 0) return false;
    return true;
  };
  auto any_empty = [&] {
    for (auto& [c, set] : q.g)
      if (set.empty()) return true;
    return false;
  };
  if (any_empty()) return {NaiveResult::Kind::contradiction, 0, q};
  if (complete()) return {NaiveResult::Kind::solved, 0, q};
  for (int k = 1;; ++k) {
    // placements deduced from the previous candidates
    std::map<std::pair<int, int>, std::set<int>> deduced;
    for (auto& [c, v] : q.f)
      if (v != 0) deduced[c].insert(v);
    if (strat.naked_single)
      for (auto& [c, set] : q.g)
        if (set.size() == 1) deduced[c].insert(*set.begin());
    if (strat.hidden_single)
      for (const auto& grp : gs)
        for (auto c : grp)
          for (int d = 1; d <= q.N; ++d) {
            bool nowhere_else = true;
            for (auto other : grp)
              if (other != c && q.g[other].count(d)) nowhere_else = false;
            if (nowhere_else) deduced[c].insert(d);
          }
    for (auto& [c, set] : deduced)
      if (set.size() > 1) return {NaiveResult::Kind::contradiction, k, q};
    NaiveState next = q;
    for (auto& [c, set] : deduced) next.f[c] = *set.begin();
    // locked-candidate removals read from the previous candidates
    if (strat.locked_candidate)
      for (const auto& ga : gs)
        for (const auto& gb : gs) {
          std::set<std::pair<int, int>> sa(ga.begin(), ga.end()), sb(gb.begin(), gb.end());
          if (sa == sb) continue;
          std::set<std::pair<int, int>> common;
          for (auto c : sa)
            if (sb.count(c)) common.insert(c);
          if (static_cast<int>(common.size()) != q.n) continue;
          for (int d = 1; d <= q.N; ++d) {
            bool absent = true;
            for (auto c : sa)
              if (!sb.count(c) && q.g[c].count(d)) absent = false;
            if (absent)
              for (auto c : sb)
                if (!sa.count(c)) next.g[c].erase(d);
          }
        }
    // removals forced by the new placements, same step
    for (auto& [c, v] : next.f) {
      if (v == 0) continue;
      for (int d = 1; d <= q.N; ++d)
        if (d != v) next.g[c].erase(d);
      for (const auto& grp : gs) {
        bool has_me = false;
        for (auto cc : grp) has_me |= cc == c;
        if (!has_me) continue;
        for (auto cc : grp)
          if (cc != c) next.g[cc].erase(v);
      }
    }
    for (auto& [c, set] : next.g)
      if (set.empty()) return {NaiveResult::Kind::contradiction, k, q};
    const bool fix = next.g == q.g;
    q = next;
    if (complete()) return {NaiveResult::Kind::solved, k, q};
    if (fix) return {NaiveResult::Kind::stuck, k, q};
  }
}

void check_against_naive(const ClueAssignment& a, const StrategySet& strat) {
  const SolveResult fast = closure(a, strat, a.dims);
  const NaiveResult slow = naive_closure(a, strat);
  switch (slow.kind) {
    case NaiveResult::Kind::solved: CHECK(fast.kind == SolveResult::Kind::solved); break;
    case NaiveResult::Kind::stuck: CHECK(fast.kind == SolveResult::Kind::stuck); break;
    case NaiveResult::Kind::contradiction:
      CHECK(fast.kind == SolveResult::Kind::contradiction);
      break;
  }
  CHECK(fast.steps == slow.steps);
  if (slow.kind != NaiveResult::Kind::contradiction) {
    for (int i = 0; i < a.dims.N; ++i)
      for (int j = 0; j < a.dims.N; ++j) {
        const int idx = a.dims.cell_index(i, j);
        CHECK(fast.state.f[idx] == slow.state.f.at({i, j}));
        for (Digit d = 1; d <= a.dims.N; ++d)
          CHECK(cand_has(fast.state.g[idx], d) == slow.state.g.at({i, j}).count(d));
      }
  }
}

ClueAssignment from_compact(const std::string& s, int n) {
  return parse_grid(s, Dims::of(n));
}

const char* kNakedStuckGrid =
    "050608000.300000070.000000000.000400601.700100500."
    "200000000.061000000.000070020.000090000";

}  // namespace

TEST_SUITE_BEGIN("engine");

TEST_CASE("naked singles: row of eight and empty grid") {
  const Dims d = Dims::of(3);
  ClueAssignment a(d);
  for (int j = 0; j < 8; ++j) a.set({0, j}, j + 1);
  const auto placements = naked_single_placements(make_initial_state(a), d);
  REQUIRE(placements.size() == 1);
  CHECK(placements[0] == std::pair{Cell{0, 8}, 9});

  CHECK(naked_single_placements(make_initial_state(ClueAssignment(d)), d).empty());
  CHECK(hidden_single_placements(make_initial_state(ClueAssignment(d)), d).empty());
  CHECK(locked_candidate_removals(make_initial_state(ClueAssignment(d)), d).empty());
}

TEST_CASE("naked singles agree with first-principles candidates on a 4x4 instance") {
  const Dims d = Dims::of(2);
  ClueAssignment a(d);
  a.set({0, 0}, 1);
  a.set({1, 2}, 2);
  a.set({2, 1}, 3);
  a.set({3, 3}, 4);
  const GridState q = make_initial_state(a);
  // oracle: recompute candidates per cell from the placement rules alone
  std::set<std::pair<std::pair<int, int>, int>> expect;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (a.values[d.cell_index(i, j)] != 0) continue;
      std::set<int> cands;
      for (int n = 1; n <= 4; ++n) {
        bool ok = true;
        for (int jj = 0; jj < 4 && ok; ++jj)
          if (a.values[d.cell_index(i, jj)] == n) ok = false;
        for (int ii = 0; ii < 4 && ok; ++ii)
          if (a.values[d.cell_index(ii, j)] == n) ok = false;
        for (int ii = (i / 2) * 2; ii < (i / 2) * 2 + 2 && ok; ++ii)
          for (int jj = (j / 2) * 2; jj < (j / 2) * 2 + 2 && ok; ++jj)
            if (a.values[d.cell_index(ii, jj)] == n) ok = false;
        if (ok) cands.insert(n);
      }
      if (cands.size() == 1) expect.insert({{i, j}, *cands.begin()});
    }
  std::set<std::pair<std::pair<int, int>, int>> got;
  for (const auto& [c, n] : naked_single_placements(q, d)) got.insert({{c.i, c.j}, n});
  CHECK(got == expect);
}

TEST_CASE("hidden single: digit excluded from the rest of a row by column placements") {
  const Dims d = Dims::of(3);
  ClueAssignment a(d);
  // a 7 in every column except 6, in rows other than 1, pairwise group-disjoint
  const std::pair<int, int> sevens[] = {{0, 0}, {2, 3}, {3, 1}, {4, 4},
                                        {5, 7}, {6, 2}, {7, 5}, {8, 8}};
  for (auto [i, j] : sevens) a.set({i, j}, 7);
  const GridState q = make_initial_state(a);
  const auto placements = hidden_single_placements(q, d);
  bool found = false;
  for (const auto& [c, n] : placements) found |= (c == Cell{1, 6} && n == 7);
  CHECK(found);
  // the oracle view: 7 must survive only at (1,6) within row 1
  for (int j = 0; j < 9; ++j)
    CHECK(cand_has(q.g[d.cell_index(1, j)], 7) == (j == 6));
}

TEST_CASE("locked candidates: survivors confined to one line clear the rest") {
  const Dims d = Dims::of(3);
  ClueAssignment a(d);
  // inside block 0, digit 3 survives only in row 0
  a.set({1, 5}, 3);
  a.set({2, 7}, 3);
  const GridState q = make_initial_state(a);
  const auto got = locked_candidate_removals(q, d);
  // oracle: recheck every ordered pair from the definition directly
  std::set<std::pair<std::pair<int, int>, int>> got_set;
  for (const auto& [c, n] : got) got_set.insert({{c.i, c.j}, n});
  const auto& geo = Geometry::of(d);
  std::set<std::pair<std::pair<int, int>, int>> expect;
  for (const auto& p : geo.pairs) {
    for (Digit n = 1; n <= 9; ++n) {
      bool absent = true;
      for (int idx : p.a_minus_b) absent &= !cand_has(q.g[idx], n);
      if (!absent) continue;
      for (int idx : p.b_minus_a)
        if (cand_has(q.g[idx], n)) expect.insert({{idx / 9, idx % 9}, n});
    }
  }
  CHECK(got_set == expect);
  // removals are always current candidates
  for (const auto& [c, n] : got) CHECK(cand_has(q.g[d.cell_index(c.i, c.j)], n));
  // the (block 0, row 0) pair clears 3 from the row outside the block,
  // except where a column already ruled it out
  for (int j : {3, 4, 6, 8}) CHECK(got_set.count({{0, j}, 3}) == 1);
  CHECK(got_set.count({{0, 5}, 3}) == 0);
  CHECK(got_set.count({{0, 7}, 3}) == 0);
}

TEST_CASE("step: complete state is a fixpoint; re-stepping changes nothing") {
  const ClueAssignment sol = random_solution(Dims::of(3), 4);
  const GridState q = make_initial_state(sol);
  const StepOutcome s = step(q, StrategySet::all(), sol.dims);
  CHECK(s.kind == StepOutcome::Kind::fixpoint);
  CHECK(s.next == q);
}

TEST_CASE("step: same-step forced removals after a naked single") {
  const Dims d = Dims::of(3);
  ClueAssignment a(d);
  for (int j = 0; j < 8; ++j) a.set({0, j}, j + 1);
  const GridState q = make_initial_state(a);
  const StepOutcome s = step(q, StrategySet::naked_only(), d);
  const int idx = d.cell_index(0, 8);
  CHECK(s.next.f[idx] == 9);
  // peers of (0,8) lose 9 in the same transition
  for (int i = 1; i < 9; ++i) CHECK(!cand_has(s.next.g[d.cell_index(i, 8)], 9));
}

TEST_CASE("step: two hidden singles deducing different digits collide") {
  // 2 and 3 both become forced at (0,0) on a 4x4 board
  const ClueAssignment a = from_compact("0000003202030320", 2);
  const SolveResult r = closure(a, {false, true, false}, a.dims);
  CHECK(r.kind == SolveResult::Kind::contradiction);
  CHECK(r.steps == 1);
  check_against_naive(a, {false, true, false});
}

TEST_CASE("closure: complete input solves in zero steps") {
  const ClueAssignment sol = random_solution(Dims::of(3), 21);
  const SolveResult r = closure(sol, StrategySet::all(), sol.dims);
  CHECK(r.kind == SolveResult::Kind::solved);
  CHECK(r.steps == 0);
}

TEST_CASE("closure: 80 clues solve in one step with naked singles") {
  const ClueAssignment sol = random_solution(Dims::of(3), 22);
  ClueAssignment a = sol;
  a.values[40] = 0;
  const SolveResult r = closure(a, StrategySet::naked_only(), a.dims);
  CHECK(r.kind == SolveResult::Kind::solved);
  CHECK(r.steps == 1);
  CHECK(r.state.f == sol.values);
  CHECK(is_strategy_solvable(a, StrategySet::naked_only(), a.dims));
}

TEST_CASE("closure: published 17-clue grid is stuck under naked singles only") {
  const ClueAssignment a = parse_grid(kNakedStuckGrid, Dims::of(3));
  const SolveResult r = closure(a, StrategySet::naked_only(), a.dims);
  CHECK(r.kind == SolveResult::Kind::stuck);
  check_against_naive(a, StrategySet::naked_only());
}

TEST_CASE("closure agrees with the reference simulator") {
  Rng rng(31);
  int contradictions = 0, solved = 0, stuck = 0;
  for (int t = 0; t < 60; ++t) {
    const Dims d = Dims::of(t % 3 == 0 ? 3 : 2);
    ClueAssignment a(d);
    if (t % 2 == 0) {
      a = random_solution(d, rng.next());
      for (int idx = 0; idx < d.cells(); ++idx)
        if (rng.below(100) < 65) a.values[idx] = 0;
    } else {
      // unconstrained digits, possibly inconsistent
      for (int idx = 0; idx < d.cells(); ++idx)
        if (rng.below(100) < 30) a.values[idx] = rng.range(1, d.N);
    }
    const StrategySet sets[] = {StrategySet::all(), StrategySet::naked_only(),
                                {false, true, false}, {true, false, true},
                                {false, true, true}};
    const StrategySet strat = sets[rng.below(5)];
    check_against_naive(a, strat);
    switch (closure(a, strat, d).kind) {
      case SolveResult::Kind::solved: ++solved; break;
      case SolveResult::Kind::stuck: ++stuck; break;
      case SolveResult::Kind::contradiction: ++contradictions; break;
    }
  }
  // the sample must exercise all three outcomes
  CHECK(solved > 0);
  CHECK(stuck > 0);
  CHECK(contradictions > 0);
}

TEST_CASE("determinism: identical traces across runs") {
  const Dims d = Dims::of(3);
  ClueAssignment a = random_solution(d, 55);
  Rng rng(56);
  for (int idx = 0; idx < d.cells(); ++idx)
    if (rng.below(100) < 55) a.values[idx] = 0;
  Trace t1, t2;
  const SolveResult r1 = closure(a, StrategySet::all(), d, &t1);
  const SolveResult r2 = closure(a, StrategySet::all(), d, &t2);
  CHECK(r1.kind == r2.kind);
  CHECK(r1.state == r2.state);
  CHECK(t1.states == t2.states);
  CHECK(t1.to_text() == t2.to_text());
}

TEST_CASE("monotonicity and validity along the trace") {
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    const Dims d = Dims::of(t % 2 ? 2 : 3);
    ClueAssignment a = random_solution(d, rng.next());
    for (int idx = 0; idx < d.cells(); ++idx)
      if (rng.below(100) < 60) a.values[idx] = 0;
    Trace trace;
    const SolveResult r = closure(a, StrategySet::all(), d, &trace);
    CHECK(r.steps <= step_bound(d));
    for (size_t k = 1; k < trace.states.size(); ++k) {
      const GridState& prev = trace.states[k - 1];
      const GridState& cur = trace.states[k];
      CHECK(!validate_state(cur).has_value());
      for (int idx = 0; idx < d.cells(); ++idx) {
        if (prev.f[idx] != 0) CHECK(cur.f[idx] == prev.f[idx]);
        CHECK((cur.g[idx] & ~prev.g[idx]) == 0);  // candidates never grow
      }
    }
    if (r.kind == SolveResult::Kind::solved) CHECK(is_valid_solution(r.state));
    if (r.kind == SolveResult::Kind::stuck) {
      // stuck means stabilized: one more step changes nothing
      const StepOutcome again = step(r.state, StrategySet::all(), d);
      CHECK(again.kind == StepOutcome::Kind::fixpoint);
      CHECK(again.next == r.state);
    }
  }
}

TEST_CASE("soundness: placements never deviate from the source solution") {
  Rng rng(101);
  for (int t = 0; t < 25; ++t) {
    const Dims d = Dims::of(3);
    const ClueAssignment sol = random_solution(d, rng.next());
    ClueAssignment a = sol;
    const int keep = rng.range(30, 60);
    const auto dropped = Rng(rng.next()).sample(81, 81 - keep);
    for (int idx : dropped) a.values[idx] = 0;
    const SolveResult r = closure(a, StrategySet::all(), d);
    CHECK(r.kind != SolveResult::Kind::contradiction);
    for (int idx = 0; idx < 81; ++idx)
      if (r.state.f[idx] != 0) CHECK(r.state.f[idx] == sol.values[idx]);
  }
}

TEST_CASE("strategy monotonicity: more strategies never lose a solve") {
  Rng rng(202);
  for (int t = 0; t < 20; ++t) {
    const Dims d = Dims::of(t % 2 ? 3 : 2);
    ClueAssignment a = random_solution(d, rng.next());
    for (int idx = 0; idx < d.cells(); ++idx)
      if (rng.below(100) < 55) a.values[idx] = 0;
    const bool ns = is_strategy_solvable(a, StrategySet::naked_only(), d);
    const bool ns_hs = is_strategy_solvable(a, {true, true, false}, d);
    const bool all = is_strategy_solvable(a, StrategySet::all(), d);
    if (ns) CHECK(ns_hs);
    if (ns_hs) CHECK(all);
  }
}

TEST_CASE("trace export format") {
  const Dims d = Dims::of(3);
  ClueAssignment a(d);
  for (int j = 0; j < 8; ++j) a.set({0, j}, j + 1);
  Trace trace;
  closure(a, StrategySet::naked_only(), d, &trace);
  const std::string text = trace.to_text();
  CHECK(text.find("step 1") == 0);
  CHECK(text.find("1 0 8 9 naked_single") != std::string::npos);
  // same-step forced removal of 9 from a column peer
  CHECK(text.find("1 1 8 9 s2") != std::string::npos);
}

TEST_SUITE_END();
