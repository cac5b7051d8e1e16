// Clause storage and the DIMACS text format.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ssc/grid.hpp"

namespace ssc {

// Clauses over 1-based variable ids, flattened into one arena.
class CnfFormula {
 public:
  int new_var() { return ++num_vars_; }
  void ensure_vars(int n) {
    if (n > num_vars_) num_vars_ = n;
  }
  int num_vars() const { return num_vars_; }
  size_t num_clauses() const { return starts_.size() - 1; }

  void add_clause(std::span<const int> lits) {
    SSC_ASSERT(!lits.empty());
    for (int lit : lits) {
      SSC_ASSERT(lit != 0 && std::abs(lit) <= num_vars_);
      literals_.push_back(lit);
    }
    starts_.push_back(static_cast<uint32_t>(literals_.size()));
  }
  void add_clause(std::initializer_list<int> lits) {
    add_clause(std::span<const int>(lits.begin(), lits.size()));
  }

  std::span<const int32_t> clause(size_t c) const {
    return {literals_.data() + starts_[c], literals_.data() + starts_[c + 1]};
  }

  size_t num_literals() const { return literals_.size(); }

 private:
  int num_vars_ = 0;
  std::vector<int32_t> literals_;
  std::vector<uint32_t> starts_{0};
};

// model[v] for v in 1..num_vars; index 0 unused.
using Model = std::vector<uint8_t>;

inline bool lit_true(const Model& m, int lit) {
  const bool v = m[static_cast<size_t>(std::abs(lit))] != 0;
  return lit > 0 ? v : !v;
}

// True iff every clause has a satisfied literal.
bool model_satisfies(const CnfFormula& f, const Model& m);

void emit_dimacs(const CnfFormula& f, std::ostream& os);
std::string emit_dimacs(const CnfFormula& f);
CnfFormula parse_dimacs(std::istream& is);

}  // namespace ssc
