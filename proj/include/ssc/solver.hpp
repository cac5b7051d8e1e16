// In-process CDCL solver: two-watched literals, 1UIP learning with basic
// clause minimization, VSIDS decisions with phase saving, Luby restarts, and
// LBD-ordered learnt-clause reduction.  Supports solving under assumptions;
// learnt clauses stay valid across calls because assumptions enter the trail
// as decisions, never as clauses.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ssc {

class CdclSolver {
 public:
  enum class Result { sat, unsat, unknown };

  CdclSolver();

  void ensure_vars(int n);
  int num_vars() const { return static_cast<int>(activity_.size()); }

  // Clauses use DIMACS conventions (signed 1-based ids).  Must be called
  // before solve; returns false once the formula is unsatisfiable at level 0.
  bool add_clause(std::span<const int> dimacs_lits);
  bool add_clause(std::initializer_list<int> lits) {
    return add_clause(std::span<const int>(lits.begin(), lits.size()));
  }

  // time_limit_s < 0 and conflict_budget < 0 mean unlimited.
  Result solve(std::span<const int> assumptions = {}, double time_limit_s = -1,
               int64_t conflict_budget = -1);

  bool model_value(int dimacs_var) const;  // valid after Result::sat

  struct Stats {
    uint64_t conflicts = 0;
    uint64_t decisions = 0;
    uint64_t propagations = 0;
    uint64_t restarts = 0;
    uint64_t learnt_live = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  using CRef = uint32_t;
  static constexpr CRef kCRefUndef = 0xffffffffu;
  static constexpr CRef kLearntBit = 0x80000000u;
  // watch-list tag only, never part of a stored CRef
  static constexpr CRef kBinaryBit = 0x40000000u;

  struct Watcher {
    CRef cref;    // binary watchers carry kBinaryBit; blocker is the other literal
    int blocker;
  };

  // clause memory ------------------------------------------------------
  // layout: header word (size << 2 | deleted << 0 | relocated << 1),
  // then for learnt clauses one LBD word, then the literals.
  std::vector<uint32_t> prob_mem_;
  std::vector<uint32_t> learnt_mem_;
  std::vector<CRef> learnts_;

  uint32_t* clause_base(CRef cr) {
    return (cr & kLearntBit) ? &learnt_mem_[cr & ~kLearntBit] : &prob_mem_[cr];
  }
  const uint32_t* clause_base(CRef cr) const {
    return (cr & kLearntBit) ? &learnt_mem_[cr & ~kLearntBit] : &prob_mem_[cr];
  }
  static bool is_learnt(CRef cr) { return (cr & kLearntBit) != 0; }
  uint32_t* clause_lits(CRef cr) { return clause_base(cr) + 1 + (is_learnt(cr) ? 1 : 0); }
  int clause_size(CRef cr) const { return static_cast<int>(clause_base(cr)[0] >> 2); }

  CRef alloc_clause(std::span<const int> internal_lits, bool learnt, int lbd);

  // assignment ----------------------------------------------------------
  std::vector<int8_t> values_;   // per var: 0 undef, 1 true, -1 false
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  bool ok_ = true;

  int value_of(int lit) const {
    const int8_t v = values_[lit >> 1];
    return (lit & 1) ? -v : v;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }
  void unchecked_enqueue(int lit, CRef from);
  void cancel_until(int level);

  // propagation ---------------------------------------------------------
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal
  void attach_clause(CRef cr);
  CRef propagate();

  // conflict analysis ---------------------------------------------------
  std::vector<uint8_t> seen_;
  std::vector<int> to_clear_;
  std::vector<uint64_t> level_stamp_;
  uint64_t stamp_counter_ = 0;
  void analyze(CRef confl, std::vector<int>& out_learnt, int& out_btlevel, int& out_lbd);
  bool literal_redundant(int lit);
  int compute_lbd(std::span<const int> lits);

  // decisions -----------------------------------------------------------
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<uint8_t> phase_;
  void heap_insert(int v);
  void heap_up(int i);
  void heap_down(int i);
  int heap_pop();
  void bump_var(int v);
  void decay_var_activity() { var_inc_ /= 0.95; }
  int pick_branch();

  // learnt DB management ------------------------------------------------
  uint64_t conflicts_at_last_reduce_ = 0;
  uint64_t reduce_count_ = 0;
  void reduce_db();
  void rebuild_watches();
  bool clause_locked(CRef cr);

  Stats stats_;
  std::vector<uint8_t> model_;

  Result search(std::span<const int> assumptions, double time_limit_s, int64_t conflict_budget);
};

}  // namespace ssc
