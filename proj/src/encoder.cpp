#include "ssc/encoder.hpp"

#include <ostream>

namespace ssc {

VarMap::VarMap(const Dims& dims, int K, const ClueMask* mask, bool clue_reduction,
               bool minclue)
    : dims_(dims),
      K_(K),
      cells_(dims.cells()),
      reduced_(clue_reduction && !minclue),
      minclue_(minclue),
      clue_(dims.cells(), 0) {
  SSC_ASSERT(K >= 1 && K <= max_unroll(dims));
  if (!minclue) {
    SSC_ASSERT(mask != nullptr);
    clue_ = mask->flags;
  }
  const int N = dims.N;
  x_base_.assign(static_cast<size_t>(K + 1) * cells_, 0);
  y_base_.assign(static_cast<size_t>(K + 1) * cells_, 0);
  int next = 1;
  for (int step = 0; step <= K; ++step)
    for (int cell = 0; cell < cells_; ++cell) {
      auto& slot = x_base_[static_cast<size_t>(step) * cells_ + cell];
      if (aliased(cell, step)) {
        slot = x_base_[cell];
      } else {
        slot = next;
        next += N + 1;
        x_count_ += N + 1;
      }
    }
  for (int step = 0; step <= K; ++step)
    for (int cell = 0; cell < cells_; ++cell) {
      auto& slot = y_base_[static_cast<size_t>(step) * cells_ + cell];
      if (aliased(cell, step)) {
        slot = y_base_[cell];
      } else {
        slot = next;
        next += N;
        y_count_ += N;
      }
    }
  if (minclue_) {
    u_base_ = next;
    next += cells_;
  }
  reserved_ = next - 1;
}

std::vector<int> VarMap::completion_assumptions(int step) const {
  std::vector<int> lits;
  for (int cell = 0; cell < cells_; ++cell) {
    if (is_clue(cell)) continue;  // clue cells are nonzero in every model
    lits.push_back(-x(cell, 0, step));
  }
  return lits;
}

void VarMap::write_sidecar(std::ostream& os) const {
  for (int step = 0; step <= K_; ++step)
    for (int cell = 0; cell < cells_; ++cell) {
      for (int v = 0; v <= dims_.N; ++v)
        os << "x " << cell << ' ' << v << ' ' << step << ' ' << x(cell, v, step) << '\n';
      for (Digit n = 1; n <= dims_.N; ++n)
        os << "y " << cell << ' ' << n << ' ' << step << ' ' << y(cell, n, step) << '\n';
    }
  if (minclue_)
    for (int cell = 0; cell < cells_; ++cell)
      os << "u " << cell << " 0 0 " << u(cell) << '\n';
}

namespace {

void validate_options(const ClueMask& mask, const EncodeOptions& o, const Dims& dims) {
  SSC_ASSERT(o.K >= 1 && o.K <= max_unroll(dims));
  SSC_ASSERT(mask.dims == dims);
  if (o.theta) {
    SSC_ASSERT(*o.theta >= 0 && *o.theta <= dims.cells());
    SSC_ASSERT(!o.fixed_digits);
    SSC_ASSERT(mask.count() == 0);
  }
  if (o.fixed_digits) {
    SSC_ASSERT(o.fixed_digits->dims == dims);
    for (int cell = 0; cell < dims.cells(); ++cell) {
      const Digit d = o.fixed_digits->values[cell];
      SSC_ASSERT((d != 0) == mask.contains(cell));
      SSC_ASSERT(d >= 0 && d <= dims.N);
    }
  }
}

}  // namespace

InstanceEncoder::InstanceEncoder(const ClueMask& mask, const EncodeOptions& options,
                                 const Dims& dims)
    : dims_(dims),
      geo_(Geometry::of(dims)),
      options_(options),
      mask_(mask),
      varmap_(dims, options.K, &mask, options.clue_reduction, options.theta.has_value()) {
  validate_options(mask, options, dims);
  cell_pairs_.resize(dims.cells());
  pair_used_.assign(geo_.pairs.size(), 0);
  for (size_t p = 0; p < geo_.pairs.size(); ++p)
    for (int cell : geo_.pairs[p].b_minus_a) {
      cell_pairs_[cell].push_back(static_cast<int>(p));
      if (transition_cell(cell)) pair_used_[p] = 1;
    }
  z_locked_scratch_.assign(geo_.pairs.size() * dims.N, 0);
  formula_.ensure_vars(varmap_.reserved());
}

void InstanceEncoder::define_and(int lhs, std::span<const int> rhs) {
  // lhs ↔ ∧ rhs
  std::vector<int> wide;
  wide.reserve(rhs.size() + 1);
  wide.push_back(lhs);
  for (int lit : rhs) {
    formula_.add_clause({-lhs, lit});
    wide.push_back(-lit);
  }
  formula_.add_clause(wide);
}

void InstanceEncoder::define_or(int lhs, std::span<const int> rhs) {
  // lhs ↔ ∨ rhs
  std::vector<int> wide;
  wide.reserve(rhs.size() + 1);
  wide.push_back(-lhs);
  for (int lit : rhs) {
    formula_.add_clause({-lit, lhs});
    wide.push_back(lit);
  }
  formula_.add_clause(wide);
}

void InstanceEncoder::encode_one_hot(int step) {
  const int N = dims_.N;
  std::vector<int> alo(N + 1);
  for (int cell = 0; cell < dims_.cells(); ++cell) {
    if (varmap_.aliased(cell, step)) continue;
    for (int v = 0; v <= N; ++v) alo[v] = varmap_.x(cell, v, step);
    formula_.add_clause(alo);
    for (int v = 0; v <= N; ++v)
      for (int w = v + 1; w <= N; ++w)
        formula_.add_clause({-varmap_.x(cell, v, step), -varmap_.x(cell, w, step)});
  }
}

void InstanceEncoder::encode_initial() {
  if (varmap_.minclue()) return;  // clue positions are free in min-clue mode
  for (int cell = 0; cell < dims_.cells(); ++cell) {
    if (mask_.contains(cell))
      formula_.add_clause({-varmap_.x(cell, 0, 0)});
    else
      formula_.add_clause({varmap_.x(cell, 0, 0)});
  }
  if (options_.fixed_digits) {
    for (int cell = 0; cell < dims_.cells(); ++cell) {
      const Digit d = options_.fixed_digits->values[cell];
      if (d != 0) formula_.add_clause({varmap_.x(cell, d, 0)});
    }
  }
}

void InstanceEncoder::encode_placement_rules(int step) {
  SSC_ASSERT(step >= 1);
  const int N = dims_.N;
  std::vector<int> zs, lits;
  for (int cell = 0; cell < dims_.cells(); ++cell) {
    if (!transition_cell(cell)) continue;
    for (Digit n = 1; n <= N; ++n) {
      zs.clear();
      // carried over from the previous step
      const int z_prev = formula_.new_var();
      ++stats_.z_persist_place;
      define_and(z_prev, std::array{varmap_.x(cell, n, step - 1)});
      zs.push_back(z_prev);
      if (options_.strategies.naked_single) {
        lits.clear();
        for (Digit m = 1; m <= N; ++m)
          if (m != n) lits.push_back(-varmap_.y(cell, m, step - 1));
        const int z = formula_.new_var();
        ++stats_.z_naked;
        define_and(z, lits);
        zs.push_back(z);
      }
      if (options_.strategies.hidden_single) {
        for (int gi : geo_.cell_groups[cell]) {
          lits.clear();
          for (int other : geo_.group_cells[gi])
            if (other != cell) lits.push_back(-varmap_.y(other, n, step - 1));
          const int z = formula_.new_var();
          ++stats_.z_hidden;
          define_and(z, lits);
          zs.push_back(z);
        }
      }
      define_or(varmap_.x(cell, n, step), zs);
    }
  }
}

void InstanceEncoder::ensure_locked_defs(int step) {
  if (z_locked_step_ == step) return;
  z_locked_step_ = step;
  const int N = dims_.N;
  std::vector<int> lits;
  for (size_t p = 0; p < geo_.pairs.size(); ++p) {
    if (!pair_used_[p]) continue;
    for (Digit n = 1; n <= N; ++n) {
      lits.clear();
      for (int other : geo_.pairs[p].a_minus_b)
        lits.push_back(-varmap_.y(other, n, step - 1));
      const int z = formula_.new_var();
      ++stats_.z_locked;
      define_and(z, lits);
      z_locked_scratch_[p * N + (n - 1)] = z;
    }
  }
}

void InstanceEncoder::encode_removal_rules(int step) {
  const int N = dims_.N;
  const bool locked = options_.strategies.locked_candidate && step >= 1;
  if (locked) ensure_locked_defs(step);
  std::vector<int> zs, lits;
  for (int cell = 0; cell < dims_.cells(); ++cell) {
    if (step >= 1 && !transition_cell(cell)) continue;
    for (Digit n = 1; n <= N; ++n) {
      zs.clear();
      if (step >= 1) {
        const int z_prev = formula_.new_var();
        ++stats_.z_persist_remove;
        define_and(z_prev, std::array{-varmap_.y(cell, n, step - 1)});
        zs.push_back(z_prev);
      }
      // a different digit is determined at this cell (same step)
      lits.clear();
      for (Digit m = 1; m <= N; ++m)
        if (m != n) lits.push_back(varmap_.x(cell, m, step));
      const int z_own = formula_.new_var();
      ++stats_.z_s2_own;
      define_or(z_own, lits);
      zs.push_back(z_own);
      // the digit is determined at a group mate (same step)
      for (int gi : geo_.cell_groups[cell]) {
        lits.clear();
        for (int other : geo_.group_cells[gi])
          if (other != cell) lits.push_back(varmap_.x(other, n, step));
        const int z = formula_.new_var();
        ++stats_.z_s2_peer;
        define_or(z, lits);
        zs.push_back(z);
      }
      if (locked)
        for (int p : cell_pairs_[cell]) zs.push_back(z_locked_scratch_[p * N + (n - 1)]);
      define_or(-varmap_.y(cell, n, step), zs);
    }
  }
}

void InstanceEncoder::encode_state_conditions(int step) {
  std::vector<int> lits(dims_.N);
  for (int cell = 0; cell < dims_.cells(); ++cell) {
    if (varmap_.aliased(cell, step)) continue;  // identical to the step-0 clause
    for (Digit n = 1; n <= dims_.N; ++n) lits[n - 1] = varmap_.y(cell, n, step);
    formula_.add_clause(lits);
  }
}

void InstanceEncoder::encode_progress_filter(int step) {
  SSC_ASSERT(step >= 1);
  const int N = dims_.N;
  std::vector<int> ds;
  for (int cell = 0; cell < dims_.cells(); ++cell) {
    if (!transition_cell(cell)) continue;
    for (Digit n = 1; n <= N; ++n) {
      const int prev = varmap_.y(cell, n, step - 1);
      const int cur = varmap_.y(cell, n, step);
      const int d = formula_.new_var();
      ++stats_.stability;
      formula_.add_clause({-d, -prev, cur});
      formula_.add_clause({-d, prev, -cur});
      formula_.add_clause({d, -prev, -cur});
      formula_.add_clause({d, prev, cur});
      ds.push_back(d);
    }
  }
  const int stable = formula_.new_var();
  ++stats_.stable_steps;
  define_and(stable, ds);
  for (int cell = 0; cell < dims_.cells(); ++cell) {
    if (!transition_cell(cell)) continue;
    formula_.add_clause({-stable, -varmap_.x(cell, 0, step)});
  }
}

void InstanceEncoder::encode_cardinality(int theta) {
  SSC_ASSERT(varmap_.minclue());
  const int m = dims_.cells();
  for (int cell = 0; cell < m; ++cell) {
    const int u = varmap_.u(cell);
    const int x0 = varmap_.x(cell, 0, 0);
    formula_.add_clause({-u, -x0});
    formula_.add_clause({u, x0});
  }
  if (theta >= m) return;  // vacuous bound
  auto u_at = [&](int i) { return varmap_.u(i - 1); };  // 1-based
  if (theta == 0) {
    for (int i = 1; i <= m; ++i) formula_.add_clause({-u_at(i)});
    return;
  }
  // sequential counter: s(i, j) = "at least j of the first i indicators"
  std::vector<int> s(static_cast<size_t>(m) * (theta + 1), 0);
  auto s_at = [&](int i, int j) -> int& { return s[static_cast<size_t>(i) * (theta + 1) + j]; };
  for (int i = 1; i <= m - 1; ++i)
    for (int j = 1; j <= theta; ++j) {
      s_at(i, j) = formula_.new_var();
      ++stats_.counter;
    }
  formula_.add_clause({-u_at(1), s_at(1, 1)});
  for (int j = 2; j <= theta; ++j) formula_.add_clause({-s_at(1, j)});
  for (int i = 2; i <= m - 1; ++i) {
    formula_.add_clause({-u_at(i), s_at(i, 1)});
    formula_.add_clause({-s_at(i - 1, 1), s_at(i, 1)});
    for (int j = 2; j <= theta; ++j) {
      formula_.add_clause({-u_at(i), -s_at(i - 1, j - 1), s_at(i, j)});
      formula_.add_clause({-s_at(i - 1, j), s_at(i, j)});
    }
    formula_.add_clause({-u_at(i), -s_at(i - 1, theta)});
  }
  formula_.add_clause({-u_at(m), -s_at(m - 1, theta)});
}

void InstanceEncoder::build() {
  encode_initial();
  for (int k = 0; k <= options_.K; ++k) encode_one_hot(k);
  for (int k = 0; k <= options_.K; ++k) encode_state_conditions(k);
  for (int k = 0; k <= options_.K; ++k) encode_removal_rules(k);
  for (int k = 1; k <= options_.K; ++k) encode_placement_rules(k);
  for (int k = 1; k <= options_.K; ++k) encode_progress_filter(k);
  if (options_.theta) encode_cardinality(*options_.theta);
}

EncodedInstance encode_instance(const ClueMask& mask, const EncodeOptions& options,
                                const Dims& dims) {
  InstanceEncoder enc(mask, options, dims);
  enc.build();
  return std::move(enc).take();
}

DecodedTrajectory decode_model(const Model& model, const VarMap& vm) {
  const Dims dims = vm.dims();
  DecodedTrajectory out{ClueAssignment(dims), {}};
  out.states.reserve(vm.K() + 1);
  for (int step = 0; step <= vm.K(); ++step) {
    GridState q(dims);
    for (int cell = 0; cell < dims.cells(); ++cell) {
      int placed = -1;
      for (int v = 0; v <= dims.N; ++v) {
        if (model[static_cast<size_t>(vm.x(cell, v, step))]) {
          if (placed >= 0)
            throw InternalError("model sets two placement literals for one cell");
          placed = v;
        }
      }
      if (placed < 0) throw InternalError("model sets no placement literal for a cell");
      q.f[cell] = placed;
      CandSet set = 0;
      for (Digit n = 1; n <= dims.N; ++n)
        if (model[static_cast<size_t>(vm.y(cell, n, step))]) set |= cand_bit(n);
      q.g[cell] = set;
    }
    out.states.push_back(std::move(q));
  }
  out.clues.values = out.states[0].f;
  return out;
}

bool model_complete_at(const Model& model, const VarMap& vm, int step) {
  for (int cell = 0; cell < vm.dims().cells(); ++cell)
    if (model[static_cast<size_t>(vm.x(cell, 0, step))]) return false;
  return true;
}

}  // namespace ssc
