#include "ssc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>

#include "ssc/grid.hpp"

namespace ssc {

namespace {

// internal literal encoding: 2*var + sign, sign 1 = negated; vars 0-based
inline int to_internal(int dimacs_lit) {
  const int v = std::abs(dimacs_lit) - 1;
  return 2 * v + (dimacs_lit < 0 ? 1 : 0);
}

// sequence 1,1,2,1,1,2,4,1,...
double luby(int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::ldexp(1.0, seq);
}

}  // namespace

CdclSolver::CdclSolver() = default;

void CdclSolver::ensure_vars(int n) {
  while (num_vars() < n) {
    values_.push_back(0);
    level_.push_back(0);
    reason_.push_back(kCRefUndef);
    seen_.push_back(0);
    phase_.push_back(0);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    level_stamp_.push_back(0);
    heap_insert(num_vars() - 1);
  }
}

CdclSolver::CRef CdclSolver::alloc_clause(std::span<const int> lits, bool learnt, int lbd) {
  auto& mem = learnt ? learnt_mem_ : prob_mem_;
  const CRef cr = static_cast<CRef>(mem.size()) | (learnt ? kLearntBit : 0);
  mem.push_back(static_cast<uint32_t>(lits.size()) << 2);
  if (learnt) mem.push_back(static_cast<uint32_t>(lbd));
  for (int lit : lits) mem.push_back(static_cast<uint32_t>(lit));
  return cr;
}

void CdclSolver::attach_clause(CRef cr) {
  uint32_t* lits = clause_lits(cr);
  const CRef tag = clause_size(cr) == 2 ? (cr | kBinaryBit) : cr;
  watches_[lits[0]].push_back({tag, static_cast<int>(lits[1])});
  watches_[lits[1]].push_back({tag, static_cast<int>(lits[0])});
}

bool CdclSolver::add_clause(std::span<const int> dimacs_lits) {
  SSC_ASSERT(decision_level() == 0);
  if (!ok_) return false;
  std::vector<int> lits;
  lits.reserve(dimacs_lits.size());
  for (int dl : dimacs_lits) {
    SSC_ASSERT(dl != 0);
    ensure_vars(std::abs(dl));
    lits.push_back(to_internal(dl));
  }
  std::sort(lits.begin(), lits.end());
  int out = 0;
  int prev = -1;
  for (int lit : lits) {
    if (lit == prev) continue;                     // duplicate
    if (prev >= 0 && (lit ^ 1) == prev) return ok_;  // tautology
    const int v = value_of(lit);
    if (v > 0) return ok_;  // satisfied at level 0
    if (v < 0) continue;    // falsified at level 0
    lits[out++] = lit;
    prev = lit;
  }
  lits.resize(out);
  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    unchecked_enqueue(lits[0], kCRefUndef);
    if (propagate() != kCRefUndef) ok_ = false;
    return ok_;
  }
  attach_clause(alloc_clause(lits, false, 0));
  return true;
}

void CdclSolver::unchecked_enqueue(int lit, CRef from) {
  const int v = lit >> 1;
  values_[v] = (lit & 1) ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = from;
  trail_.push_back(lit);
}

void CdclSolver::cancel_until(int target) {
  if (decision_level() <= target) return;
  const int boundary = trail_lim_[target];
  for (int i = static_cast<int>(trail_.size()) - 1; i >= boundary; --i) {
    const int lit = trail_[i];
    const int v = lit >> 1;
    phase_[v] = values_[v] > 0;
    values_[v] = 0;
    reason_[v] = kCRefUndef;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(boundary);
  trail_lim_.resize(target);
  qhead_ = trail_.size();
}

CdclSolver::CRef CdclSolver::propagate() {
  CRef confl = kCRefUndef;
  while (qhead_ < trail_.size()) {
    const int p = trail_[qhead_++];
    ++stats_.propagations;
    const int false_lit = p ^ 1;
    auto& ws = watches_[false_lit];
    size_t i = 0, j = 0;
    const size_t end = ws.size();
    while (i < end) {
      const Watcher w = ws[i];
      if (value_of(w.blocker) > 0) {
        ws[j++] = ws[i++];
        continue;
      }
      if (w.cref & kBinaryBit) {
        // blocker is the whole rest of the clause
        ws[j++] = ws[i++];
        if (value_of(w.blocker) < 0) {
          confl = w.cref & ~kBinaryBit;
          qhead_ = trail_.size();
          while (i < end) ws[j++] = ws[i++];
          break;
        }
        unchecked_enqueue(w.blocker, w.cref & ~kBinaryBit);
        continue;
      }
      uint32_t* lits = clause_lits(w.cref);
      const int size = clause_size(w.cref);
      if (static_cast<int>(lits[0]) == false_lit) std::swap(lits[0], lits[1]);
      const int first = static_cast<int>(lits[0]);
      if (first != w.blocker && value_of(first) > 0) {
        ws[j++] = {w.cref, first};
        ++i;
        continue;
      }
      bool moved = false;
      for (int k = 2; k < size; ++k) {
        if (value_of(static_cast<int>(lits[k])) >= 0) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1]].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) {
        ++i;
        continue;
      }
      // unit or conflicting
      ws[j++] = {w.cref, first};
      ++i;
      if (value_of(first) < 0) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < end) ws[j++] = ws[i++];
        break;
      }
      unchecked_enqueue(first, w.cref);
    }
    ws.resize(j);
    if (confl != kCRefUndef) break;
  }
  return confl;
}

void CdclSolver::bump_var(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void CdclSolver::heap_insert(int v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

void CdclSolver::heap_up(int i) {
  const int v = heap_[i];
  const double a = activity_[v];
  while (i > 0) {
    const int parent = (i - 1) >> 1;
    if (activity_[heap_[parent]] >= a) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void CdclSolver::heap_down(int i) {
  const int v = heap_[i];
  const double a = activity_[v];
  const int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= a) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

int CdclSolver::heap_pop() {
  const int v = heap_[0];
  heap_pos_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_down(0);
  }
  return v;
}

int CdclSolver::pick_branch() {
  while (!heap_.empty()) {
    const int v = heap_pop();
    if (values_[v] == 0) return 2 * v + (phase_[v] ? 0 : 1);
  }
  return -1;
}

int CdclSolver::compute_lbd(std::span<const int> lits) {
  ++stamp_counter_;
  int lbd = 0;
  for (int lit : lits) {
    const int lv = level_[lit >> 1];
    if (level_stamp_[lv] != stamp_counter_) {
      level_stamp_[lv] = stamp_counter_;
      ++lbd;
    }
  }
  return lbd;
}

bool CdclSolver::literal_redundant(int lit) {
  const CRef r = reason_[lit >> 1];
  if (r == kCRefUndef) return false;
  const uint32_t* lits = clause_lits(r);
  const int size = clause_size(r);
  const int implied = lit ^ 1;  // the literal this reason enqueued
  for (int k = 0; k < size; ++k) {
    const int q = static_cast<int>(lits[k]);
    if (q == implied) continue;
    const int v = q >> 1;
    if (!seen_[v] && level_[v] > 0) return false;
  }
  return true;
}

void CdclSolver::analyze(CRef confl, std::vector<int>& out_learnt, int& out_btlevel,
                         int& out_lbd) {
  out_learnt.clear();
  out_learnt.push_back(-1);  // slot for the asserting literal
  to_clear_.clear();
  int pathC = 0;
  int p = -1;
  int index = static_cast<int>(trail_.size()) - 1;
  do {
    SSC_ASSERT(confl != kCRefUndef);
    const uint32_t* lits = clause_lits(confl);
    const int size = clause_size(confl);
    for (int k = 0; k < size; ++k) {
      const int q = static_cast<int>(lits[k]);
      if (q == p) continue;  // the literal this reason enqueued
      const int v = q >> 1;
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        to_clear_.push_back(v);
        bump_var(v);
        if (level_[v] >= decision_level())
          ++pathC;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[trail_[index--] >> 1]) {
    }
    p = trail_[index + 1];
    confl = reason_[p >> 1];
    seen_[p >> 1] = 0;
    --pathC;
  } while (pathC > 0);
  out_learnt[0] = p ^ 1;

  // drop literals implied by the rest of the clause (basic minimization)
  size_t kept = 1;
  for (size_t k = 1; k < out_learnt.size(); ++k) {
    if (!literal_redundant(out_learnt[k])) out_learnt[kept++] = out_learnt[k];
  }
  out_learnt.resize(kept);

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    size_t max_i = 1;
    for (size_t k = 2; k < out_learnt.size(); ++k)
      if (level_[out_learnt[k] >> 1] > level_[out_learnt[max_i] >> 1]) max_i = k;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level_[out_learnt[1] >> 1];
  }
  out_lbd = compute_lbd(out_learnt);
  for (int v : to_clear_) seen_[v] = 0;
}

bool CdclSolver::clause_locked(CRef cr) {
  const int first = static_cast<int>(clause_lits(cr)[0]);
  return reason_[first >> 1] == cr && value_of(first) > 0;
}

void CdclSolver::reduce_db() {
  ++reduce_count_;
  conflicts_at_last_reduce_ = stats_.conflicts;
  // worst half by (lbd, size), keeping glue clauses and current reasons
  std::vector<std::pair<uint64_t, size_t>> order;  // key, index into learnts_
  order.reserve(learnts_.size());
  for (size_t i = 0; i < learnts_.size(); ++i) {
    const CRef cr = learnts_[i];
    const uint32_t lbd = clause_base(cr)[1];
    order.push_back({(static_cast<uint64_t>(lbd) << 32) | i, i});
  }
  std::sort(order.begin(), order.end());
  const size_t keep_target = learnts_.size() / 2;
  std::vector<uint8_t> drop(learnts_.size(), 0);
  size_t kept = 0;
  for (const auto& [key, idx] : order) {
    const CRef cr = learnts_[idx];
    const uint32_t lbd = clause_base(cr)[1];
    if (kept < keep_target || lbd <= 3 || clause_locked(cr)) {
      ++kept;
    } else {
      drop[idx] = 1;
    }
  }
  // compact the learnt arena, leaving forwarding entries for reasons
  std::vector<uint32_t> fresh;
  fresh.reserve(learnt_mem_.size() / 2 + 16);
  std::vector<CRef> live;
  live.reserve(kept);
  for (size_t i = 0; i < learnts_.size(); ++i) {
    const CRef cr = learnts_[i];
    uint32_t* base = clause_base(cr);
    if (drop[i]) {
      base[0] |= 1;  // deleted
      continue;
    }
    const int size = static_cast<int>(base[0] >> 2);
    const CRef ncr = static_cast<CRef>(fresh.size()) | kLearntBit;
    fresh.push_back(base[0]);
    fresh.push_back(base[1]);
    for (int k = 0; k < size; ++k) fresh.push_back(base[2 + k]);
    base[0] |= 2;  // relocated
    base[1] = ncr;
    live.push_back(ncr);
  }
  // remap reasons through the forwarding entries
  for (int lit : trail_) {
    CRef& r = reason_[lit >> 1];
    if (r != kCRefUndef && is_learnt(r)) {
      const uint32_t* base = clause_base(r);
      SSC_ASSERT((base[0] & 1) == 0);  // reasons are never dropped
      if (base[0] & 2) r = base[1];
    }
  }
  learnt_mem_.swap(fresh);
  learnts_.swap(live);
  stats_.learnt_live = learnts_.size();
  rebuild_watches();
}

void CdclSolver::rebuild_watches() {
  for (auto& ws : watches_) ws.clear();
  for (size_t pos = 0; pos < prob_mem_.size();) {
    const uint32_t header = prob_mem_[pos];
    const int size = static_cast<int>(header >> 2);
    if (!(header & 1)) attach_clause(static_cast<CRef>(pos));
    pos += 1 + static_cast<size_t>(size);
  }
  for (const CRef cr : learnts_) attach_clause(cr);
}

CdclSolver::Result CdclSolver::search(std::span<const int> assumptions, double time_limit_s,
                                      int64_t conflict_budget) {
  const auto start = std::chrono::steady_clock::now();
  const uint64_t conflict_limit =
      conflict_budget < 0 ? ~uint64_t{0} : stats_.conflicts + static_cast<uint64_t>(conflict_budget);
  uint64_t restart_limit = stats_.conflicts + 100;
  int restart_idx = 0;
  std::vector<int> learnt;
  auto out_of_budget = [&] {
    if (stats_.conflicts >= conflict_limit) return true;
    if (time_limit_s >= 0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (elapsed > time_limit_s) return true;
    }
    return false;
  };

  for (;;) {
    const CRef confl = propagate();
    if (confl != kCRefUndef) {
      ++stats_.conflicts;
      if (decision_level() == 0) {
        ok_ = false;
        return Result::unsat;
      }
      int btlevel = 0, lbd = 0;
      analyze(confl, learnt, btlevel, lbd);
      cancel_until(btlevel);
      if (learnt.size() == 1) {
        unchecked_enqueue(learnt[0], kCRefUndef);
      } else {
        const CRef cr = alloc_clause(learnt, true, lbd);
        learnts_.push_back(cr);
        attach_clause(cr);
        unchecked_enqueue(learnt[0], cr);
      }
      decay_var_activity();
      if ((stats_.conflicts & 63) == 0 && out_of_budget()) {
        cancel_until(0);
        return Result::unknown;
      }
      continue;
    }
    if (stats_.conflicts >= restart_limit) {
      restart_limit = stats_.conflicts + static_cast<uint64_t>(luby(restart_idx++) * 100.0);
      ++stats_.restarts;
      cancel_until(0);
      continue;
    }
    if (stats_.conflicts - conflicts_at_last_reduce_ > 2000 + 500 * reduce_count_) reduce_db();
    if (out_of_budget()) {
      cancel_until(0);
      return Result::unknown;
    }

    int next = -1;
    while (decision_level() < static_cast<int>(assumptions.size())) {
      const int p = assumptions[decision_level()];
      if (value_of(p) > 0) {
        new_decision_level();  // already implied; keep level bookkeeping aligned
      } else if (value_of(p) < 0) {
        cancel_until(0);
        return Result::unsat;
      } else {
        next = p;
        break;
      }
    }
    if (next == -1) {
      next = pick_branch();
      if (next == -1) {
        // complete assignment
        model_.assign(values_.size() + 1, 0);
        for (size_t v = 0; v < values_.size(); ++v) model_[v + 1] = values_[v] > 0;
        cancel_until(0);
        return Result::sat;
      }
      ++stats_.decisions;
    }
    new_decision_level();
    unchecked_enqueue(next, kCRefUndef);
  }
}

CdclSolver::Result CdclSolver::solve(std::span<const int> assumptions, double time_limit_s,
                                     int64_t conflict_budget) {
  if (!ok_) return Result::unsat;
  cancel_until(0);
  if (propagate() != kCRefUndef) {
    ok_ = false;
    return Result::unsat;
  }
  std::vector<int> assumps;
  assumps.reserve(assumptions.size());
  for (int dl : assumptions) {
    SSC_ASSERT(dl != 0);
    ensure_vars(std::abs(dl));
    assumps.push_back(to_internal(dl));
  }
  const Result r = search(assumps, time_limit_s, conflict_budget);
  cancel_until(0);
  return r;
}

bool CdclSolver::model_value(int dimacs_var) const {
  SSC_ASSERT(dimacs_var >= 1 && dimacs_var < static_cast<int>(model_.size()));
  return model_[static_cast<size_t>(dimacs_var)] != 0;
}

}  // namespace ssc
