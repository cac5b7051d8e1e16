// Command-line surface: generate / check / trace / encode / minclue /
// oracle / classify / bench.
//
// Exit codes: 0 definitive verdict (including UNSOLVABLE), 2 usage error,
// 3 UNKNOWN verdict, 4 I/O error, 5 internal error.
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ssc/encoder.hpp"
#include "ssc/engine.hpp"
#include "ssc/oracle.hpp"
#include "ssc/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitIo = 4;
constexpr int kExitInternal = 5;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ssc::IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CommonOpts {
  int n = 3;
  std::string strategies = "ns,hs,lc";
  int kmin = 30;
  int kmax = 649;
  double time_limit = 600.0;
  double global_budget = -1.0;
  bool no_probe = false;
  bool no_reduction = false;
  std::string backend = "internal";
  std::string sat_solver;
  std::string output;

  void attach(CLI::App* cmd, bool with_search_flags = true) {
    cmd->add_option("-n,--order", n, "block order (3 = ordinary 9x9)")->default_val(3);
    cmd->add_option("-s,--strategies", strategies,
                    "comma list of strategies: ns, hs, lc")
        ->default_val("ns,hs,lc");
    if (with_search_flags) {
      cmd->add_option("--kmin", kmin, "initial unrolling depth")->default_val(30);
      cmd->add_option("--kmax", kmax, "maximum unrolling depth")->default_val(649);
      cmd->add_option("-t,--time-limit", time_limit, "per-solve time limit in seconds")
          ->default_val(600.0);
      cmd->add_option("--global-budget", global_budget,
                      "overall wall-clock budget in seconds (unlimited if omitted)");
      cmd->add_flag("--no-probe", no_probe, "skip the step-K completion probe");
      cmd->add_flag("--no-reduction", no_reduction, "disable the clue-cell reduction");
      cmd->add_option("--backend", backend, "sat backend: internal or external")
          ->check(CLI::IsMember({"internal", "external"}))
          ->default_val("internal");
      cmd->add_option("--sat-solver", sat_solver,
                      "external solver executable (also: SSCGEN_SAT_SOLVER)");
    }
    cmd->add_option("-o,--output", output, "write the report to this file");
  }

  ssc::Dims dims() const { return ssc::Dims::of(n); }
  ssc::StrategySet strategy_set() const { return ssc::StrategySet::parse(strategies); }

  ssc::SearchOptions search_options(const ssc::Dims& d) const {
    ssc::SearchOptions so;
    so.K_min = kmin;
    so.K_max = std::min(kmax, ssc::max_unroll(d));
    so.strategies = strategy_set();
    so.clue_reduction = !no_reduction;
    so.completion_probe = !no_probe;
    if (global_budget > 0) so.global_budget_s = global_budget;
    return so;
  }

  ssc::SolverConfig solver_config() const {
    ssc::SolverConfig cfg;
    cfg.time_limit_s = time_limit;
    std::string exe = sat_solver;
    if (exe.empty())
      if (const char* env = std::getenv("SSCGEN_SAT_SOLVER")) exe = env;
    if (backend == "external") {
      if (exe.empty())
        throw ssc::Error("external backend selected but no solver path given "
                         "(--sat-solver or SSCGEN_SAT_SOLVER)");
      cfg.backend = ssc::SolverConfig::Backend::external;
      cfg.external_path = exe;
    }
    return cfg;
  }

  void emit(const std::string& text) const {
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output);
      if (!out) throw ssc::IoError("cannot write " + output);
      out << text;
    }
  }
};

int run_generate(const CommonOpts& opts, const std::string& mask_path) {
  const ssc::Dims dims = opts.dims();
  const ssc::ClueMask mask = ssc::parse_mask(slurp(mask_path), dims);
  const ssc::SearchOutcome outcome =
      ssc::find_clues(mask, opts.search_options(dims), opts.solver_config());
  opts.emit(ssc::format_report(outcome));
  return outcome.kind == ssc::SearchOutcome::Kind::unknown ? kExitUnknown : kExitOk;
}

int run_check(const CommonOpts& opts, const std::string& grid_path, bool with_trace) {
  const ssc::Dims dims = opts.dims();
  const ssc::ClueAssignment clues = ssc::parse_grid(slurp(grid_path), dims);
  ssc::Trace trace;
  const ssc::SolveResult r =
      ssc::closure(clues, opts.strategy_set(), dims, with_trace ? &trace : nullptr);
  std::ostringstream os;
  if (with_trace) os << trace.to_text();
  os << "result: " << ssc::to_string(r.kind) << '\n';
  os << "steps: " << r.steps << '\n';
  if (r.solved())
    os << "grid: " << ssc::serialize_grid(r.state.f, dims, ssc::GridFormat::compact) << '\n';
  if (r.kind == ssc::SolveResult::Kind::contradiction) os << "reason: " << r.reason << '\n';
  opts.emit(os.str());
  return kExitOk;
}

int run_encode(const CommonOpts& opts, const std::string& mask_path, int K, int theta,
               const std::string& fixed_path, const std::string& cnf_path,
               const std::string& map_path) {
  const ssc::Dims dims = opts.dims();
  ssc::EncodeOptions eo;
  eo.K = K;
  eo.strategies = opts.strategy_set();
  eo.clue_reduction = !opts.no_reduction;
  ssc::ClueMask mask(dims);
  if (theta >= 0) {
    eo.theta = theta;
  } else if (!fixed_path.empty()) {
    eo.fixed_digits = ssc::parse_grid(slurp(fixed_path), dims);
    mask = eo.fixed_digits->mask();
  } else {
    if (mask_path.empty()) throw ssc::Error("encode needs a mask, --theta, or --fixed-grid");
    mask = ssc::parse_mask(slurp(mask_path), dims);
  }
  const ssc::EncodedInstance inst = ssc::encode_instance(mask, eo, dims);
  {
    std::ofstream out(cnf_path);
    if (!out) throw ssc::IoError("cannot write " + cnf_path);
    ssc::emit_dimacs(inst.formula, out);
  }
  if (!map_path.empty()) {
    std::ofstream out(map_path);
    if (!out) throw ssc::IoError("cannot write " + map_path);
    inst.varmap.write_sidecar(out);
  }
  std::cout << "vars: " << inst.formula.num_vars() << '\n'
            << "clauses: " << inst.formula.num_clauses() << '\n';
  return kExitOk;
}

int run_minclue(const CommonOpts& opts, int theta_start) {
  const ssc::Dims dims = opts.dims();
  const ssc::MinClueReport report =
      ssc::min_clues(dims, opts.search_options(dims), opts.solver_config(), theta_start);
  opts.emit(ssc::format_report(report));
  return report.exact ? kExitOk : kExitUnknown;
}

int run_oracle(const CommonOpts& opts, const std::string& mask_path, int64_t cap) {
  const ssc::Dims dims = opts.dims();
  const ssc::ClueMask mask = ssc::parse_mask(slurp(mask_path), dims);
  const auto found = ssc::brute_force_solvable(mask, opts.strategy_set(), cap);
  std::ostringstream os;
  if (found) {
    os << "result: CLUES\n";
    os << "grid: " << ssc::serialize_grid(*found, ssc::GridFormat::compact) << '\n';
  } else {
    os << "result: UNSOLVABLE\n";
  }
  opts.emit(os.str());
  return kExitOk;
}

int run_classify(const CommonOpts& opts, const std::string& path, int jobs,
                 const std::string& verdict_path) {
  const ssc::Dims dims = opts.dims();
  const ssc::CollectionStats stats =
      ssc::classify_collection(path, opts.strategy_set(), dims, jobs);
  opts.emit(ssc::format_stats(stats, opts.strategy_set()));
  if (!verdict_path.empty()) {
    std::ofstream out(verdict_path);
    if (!out) throw ssc::IoError("cannot write " + verdict_path);
    for (size_t i = 0; i < stats.verdicts.size(); ++i)
      out << i << ' ' << (stats.verdicts[i] ? "solvable" : "unsolvable") << '\n';
  }
  return kExitOk;
}

int run_bench(const CommonOpts& opts, const std::string& masks_path, int random_count,
              int clue_min, int clue_max, uint64_t seed, int jobs) {
  const ssc::Dims dims = opts.dims();
  std::vector<ssc::ClueMask> masks;
  if (!masks_path.empty()) {
    std::ifstream in(masks_path);
    if (!in) throw ssc::IoError("cannot open " + masks_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      masks.push_back(ssc::parse_mask(line, dims));
    }
  } else {
    masks = ssc::random_masks(dims, random_count, clue_min, clue_max, seed);
  }
  std::vector<std::string> rows(masks.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= masks.size()) return;
      const ssc::SearchOutcome r =
          ssc::find_clues(masks[i], opts.search_options(dims), opts.solver_config());
      std::ostringstream os;
      os << i << ' ' << masks[i].count() << ' ';
      switch (r.kind) {
        case ssc::SearchOutcome::Kind::clues: os << "CLUES"; break;
        case ssc::SearchOutcome::Kind::unsolvable: os << "UNSOLVABLE"; break;
        case ssc::SearchOutcome::Kind::unknown: os << "UNKNOWN"; break;
      }
      os << ' ' << r.K_used << ' ' << static_cast<long long>(r.wall_ms) << '\n';
      rows[i] = os.str();
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::ostringstream os;
  os << "# mask_id clues result K wall_ms\n";
  for (const auto& row : rows) os << row;
  opts.emit(os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strategy-solvable sudoku clue tools"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string mask_path, grid_path, fixed_path, cnf_path, map_path, collection_path;
  std::string verdict_path, masks_path;
  int K = 30;
  int theta = -1;
  int theta_start = -1;
  int jobs = 1;
  int random_count = 20;
  int clue_min = 20, clue_max = 79;
  uint64_t seed = 1;
  int64_t cap = ssc::kDefaultEnumerationCap;

  auto* generate = app.add_subcommand("generate", "find digits making a clue mask solvable");
  generate->add_option("mask", mask_path, "mask file")->required();
  opts.attach(generate);

  auto* check = app.add_subcommand("check", "decide strategy-solvability of a concrete grid");
  check->add_option("grid", grid_path, "grid file")->required();
  opts.attach(check, false);

  auto* trace = app.add_subcommand("trace", "step-by-step deduction log for a grid");
  trace->add_option("grid", grid_path, "grid file")->required();
  opts.attach(trace, false);

  auto* encode = app.add_subcommand("encode", "emit the DIMACS encoding of an instance");
  encode->add_option("mask", mask_path, "mask file (ignored with --theta/--fixed-grid)");
  encode->add_option("-K,--steps", K, "unrolling depth")->default_val(30);
  encode->add_option("--theta", theta, "min-clue mode with this clue bound");
  encode->add_option("--fixed-grid", fixed_path, "pin step-0 digits from this grid");
  encode->add_option("--cnf", cnf_path, "output CNF path")->required();
  encode->add_option("--map", map_path, "variable map sidecar path");
  encode->add_flag("--no-reduction", opts.no_reduction, "disable the clue-cell reduction");
  opts.attach(encode, false);

  auto* minclue = app.add_subcommand("minclue", "minimum solvable clue count");
  minclue->add_option("--theta-start", theta_start, "initial threshold (default N*N)");
  opts.attach(minclue);

  auto* oracle = app.add_subcommand("oracle", "brute-force verdict for a clue mask");
  oracle->add_option("mask", mask_path, "mask file")->required();
  oracle->add_option("--cap", cap, "enumeration budget");
  opts.attach(oracle, false);

  auto* classify = app.add_subcommand("classify", "solvability stats for a grid collection");
  classify->add_option("collection", collection_path, "file with one grid per line")->required();
  classify->add_option("-j,--jobs", jobs, "parallel workers")->default_val(1);
  classify->add_option("--verdicts", verdict_path, "write per-grid verdicts here");
  opts.attach(classify, false);

  auto* bench = app.add_subcommand("bench", "per-instance timing table over a mask batch");
  bench->add_option("--masks", masks_path, "file with one mask per line");
  bench->add_option("--random", random_count, "generate this many random masks instead");
  bench->add_option("--clue-min", clue_min, "minimum clue count for random masks");
  bench->add_option("--clue-max", clue_max, "maximum clue count for random masks");
  bench->add_option("--seed", seed, "random mask seed");
  bench->add_option("-j,--jobs", jobs, "parallel workers")->default_val(1);
  opts.attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (generate->parsed()) return run_generate(opts, mask_path);
    if (check->parsed()) return run_check(opts, grid_path, false);
    if (trace->parsed()) return run_check(opts, grid_path, true);
    if (encode->parsed()) return run_encode(opts, mask_path, K, theta, fixed_path, cnf_path, map_path);
    if (minclue->parsed()) return run_minclue(opts, theta_start);
    if (oracle->parsed()) return run_oracle(opts, mask_path, cap);
    if (classify->parsed()) return run_classify(opts, collection_path, jobs, verdict_path);
    if (bench->parsed()) return run_bench(opts, masks_path, random_count, clue_min, clue_max, seed, jobs);
  } catch (const ssc::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ssc::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ssc::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
