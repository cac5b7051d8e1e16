#include "ssc/search.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace ssc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SearchOutcome verified_clues(const DecodedTrajectory& traj, const SearchOptions& options,
                             const Dims& dims, int K) {
  const SolveResult check = closure(traj.clues, options.strategies, dims);
  if (!check.solved() || check.steps > K)
    throw InternalError("solver model and engine closure disagree on a returned assignment");
  SearchOutcome out;
  out.kind = SearchOutcome::Kind::clues;
  out.assignment = traj.clues;
  out.K_used = K;
  out.steps_to_complete = check.steps;
  return out;
}

// Shared incremental loop; theta selects min-clue mode.
SearchOutcome run_incremental(const ClueMask& mask, std::optional<int> theta,
                              const SearchOptions& options, const SolverConfig& solver_config,
                              const Dims& dims) {
  SSC_ASSERT(options.strategies.any());
  SSC_ASSERT(options.K_min >= 1 && options.K_min <= options.K_max);
  SSC_ASSERT(options.K_max <= max_unroll(dims));
  const auto t0 = Clock::now();
  SearchOutcome out;
  out.assignment = ClueAssignment(dims);
  auto finish = [&](SearchOutcome o) {
    o.wall_ms = seconds_since(t0) * 1000.0;
    return o;
  };
  auto remaining = [&] { return options.global_budget_s - seconds_since(t0); };

  for (int K = options.K_min; K <= options.K_max; ++K) {
    out.K_used = K;
    if (remaining() <= 0) {
      out.kind = SearchOutcome::Kind::unknown;
      out.unknown_reason = SearchOutcome::UnknownReason::timeout;
      return finish(out);
    }
    EncodeOptions eo;
    eo.K = K;
    eo.strategies = options.strategies;
    eo.clue_reduction = options.clue_reduction;
    eo.completion_probe = options.completion_probe;
    eo.theta = theta;
    EncodedInstance inst = encode_instance(mask, eo, dims);
    SolverSession session(inst.formula, solver_config);
    auto per_solve = [&] {
      return std::min(solver_config.time_limit_s, std::max(0.0, remaining()));
    };

    if (options.completion_probe) {
      const std::vector<int> complete = inst.varmap.completion_assumptions(K);
      const SolverVerdict probe = session.solve_with(complete, per_solve());
      if (probe.sat()) return finish(verified_clues(decode_model(probe.model, inst.varmap),
                                                    options, dims, K));
      if (probe.kind == SolverVerdict::Kind::timeout) {
        out.kind = SearchOutcome::Kind::unknown;
        out.unknown_reason = SearchOutcome::UnknownReason::timeout;
        return finish(out);
      }
    }
    const SolverVerdict plain = session.solve_with({}, per_solve());
    switch (plain.kind) {
      case SolverVerdict::Kind::unsat:
        out.kind = SearchOutcome::Kind::unsolvable;
        return finish(out);
      case SolverVerdict::Kind::timeout:
        out.kind = SearchOutcome::Kind::unknown;
        out.unknown_reason = SearchOutcome::UnknownReason::timeout;
        return finish(out);
      case SolverVerdict::Kind::sat:
        if (!options.completion_probe && model_complete_at(plain.model, inst.varmap, K))
          return finish(verified_clues(decode_model(plain.model, inst.varmap), options, dims, K));
        // alive but not completed within K steps: deepen
        break;
    }
  }
  out.kind = SearchOutcome::Kind::unknown;
  out.unknown_reason = SearchOutcome::UnknownReason::k_exhausted;
  return finish(out);
}

}  // namespace

SearchOutcome find_clues(const ClueMask& mask, const SearchOptions& options,
                         const SolverConfig& solver_config) {
  return run_incremental(mask, std::nullopt, options, solver_config, mask.dims);
}

MinClueReport min_clues(const Dims& dims, const SearchOptions& options,
                        const SolverConfig& solver_config, int theta_start) {
  const auto t0 = Clock::now();
  if (theta_start < 0) theta_start = dims.cells();
  SSC_ASSERT(theta_start >= 0 && theta_start <= dims.cells());
  const ClueMask no_mask(dims);
  MinClueReport report;
  std::optional<SearchOutcome> witness;
  SearchOptions inner = options;

  for (int theta = theta_start; theta >= 0; --theta) {
    inner.global_budget_s = options.global_budget_s - seconds_since(t0);
    const SearchOutcome r = run_incremental(no_mask, theta, inner, solver_config, dims);
    if (r.kind == SearchOutcome::Kind::clues) {
      SSC_ASSERT(r.assignment.count() <= theta);
      witness = r;
      continue;
    }
    if (r.kind == SearchOutcome::Kind::unsolvable) {
      report.unsat_theta = theta;
      if (witness) {
        report.exact = true;
        report.theta_star = theta + 1;
        report.witness = witness->assignment;
        report.witness_K = witness->K_used;
        report.witness_steps = witness->steps_to_complete;
        SSC_ASSERT(witness->assignment.count() == theta + 1);
      }
      break;
    }
    // timeout or depth exhaustion: report the bracket seen so far as a bound
    if (witness) {
      report.theta_star = witness->assignment.count();
      report.witness = witness->assignment;
      report.witness_K = witness->K_used;
      report.witness_steps = witness->steps_to_complete;
    }
    break;
  }
  report.wall_ms = seconds_since(t0) * 1000.0;
  return report;
}

std::string format_report(const SearchOutcome& o) {
  std::ostringstream os;
  switch (o.kind) {
    case SearchOutcome::Kind::clues: os << "result: CLUES\n"; break;
    case SearchOutcome::Kind::unsolvable: os << "result: UNSOLVABLE\n"; break;
    case SearchOutcome::Kind::unknown:
      os << "result: UNKNOWN\n";
      os << "reason: "
         << (o.unknown_reason == SearchOutcome::UnknownReason::timeout ? "timeout"
                                                                       : "K_max exhausted")
         << '\n';
      break;
  }
  os << "K: " << o.K_used << '\n';
  if (o.kind == SearchOutcome::Kind::clues) {
    os << "steps: " << o.steps_to_complete << '\n';
    os << "grid: " << serialize_grid(o.assignment, GridFormat::compact) << '\n';
  }
  os << "wall_ms: " << static_cast<long long>(o.wall_ms) << '\n';
  return os.str();
}

std::string format_report(const MinClueReport& r) {
  std::ostringstream os;
  if (r.exact) {
    os << "result: CLUES\n";
    os << "theta: " << r.theta_star << '\n';
    os << "K: " << r.witness_K << '\n';
    os << "steps: " << r.witness_steps << '\n';
    os << "grid: " << serialize_grid(*r.witness, GridFormat::compact) << '\n';
  } else {
    os << "result: UNKNOWN\n";
    if (r.theta_star >= 0) {
      os << "theta_upper_bound: " << r.theta_star << '\n';
      os << "grid: " << serialize_grid(*r.witness, GridFormat::compact) << '\n';
    }
  }
  os << "wall_ms: " << static_cast<long long>(r.wall_ms) << '\n';
  return os.str();
}

}  // namespace ssc
