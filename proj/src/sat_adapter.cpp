#include "ssc/sat_adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssc/solver.hpp"

namespace ssc {

namespace {

void verify_model(const CnfFormula& f, const Model& m, std::span<const int> assumptions) {
  if (!model_satisfies(f, m))
    throw InternalError("backend returned a model that does not satisfy the formula");
  for (int lit : assumptions)
    if (!lit_true(m, lit))
      throw InternalError("backend returned a model violating an assumption");
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& stem) {
    static std::atomic<uint64_t> counter{0};
    const auto dir = std::filesystem::temp_directory_path();
    path = dir / (stem + "-" + std::to_string(::getpid()) + "-" +
                  std::to_string(counter.fetch_add(1)) + ".cnf");
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

struct ExternalRun {
  std::string output;
  bool timed_out = false;
  int exit_code = 0;
};

ExternalRun run_external(const std::string& exe, const std::string& cnf_path,
                         double time_limit_s) {
  int pipefd[2];
  if (::pipe(pipefd) != 0) throw IoError("pipe() failed launching external solver");
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    throw IoError("fork() failed launching external solver");
  }
  if (pid == 0) {
    ::dup2(pipefd[1], STDOUT_FILENO);
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    ::execlp(exe.c_str(), exe.c_str(), cnf_path.c_str(), static_cast<char*>(nullptr));
    std::perror("exec");
    ::_exit(127);
  }
  ::close(pipefd[1]);
  ExternalRun run;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(time_limit_s);
  char buf[1 << 14];
  bool open = true;
  while (open) {
    struct pollfd pfd = {pipefd[0], POLLIN, 0};
    int wait_ms = 200;
    if (time_limit_s >= 0) {
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 deadline - std::chrono::steady_clock::now())
                                 .count();
      if (remaining <= 0) {
        run.timed_out = true;
        ::kill(pid, SIGKILL);
        break;
      }
      wait_ms = static_cast<int>(std::min<long long>(remaining, 200));
    }
    const int pr = ::poll(&pfd, 1, wait_ms);
    if (pr < 0) break;
    if (pr == 0) continue;
    const ssize_t n = ::read(pipefd[0], buf, sizeof(buf));
    if (n <= 0)
      open = false;
    else
      run.output.append(buf, static_cast<size_t>(n));
  }
  ::close(pipefd[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (!run.timed_out && run.exit_code == 127)
    throw IoError("failed to launch external solver '" + exe + "'");
  return run;
}

SolverVerdict solve_external(const CnfFormula& formula, const SolverConfig& config,
                             std::span<const int> assumptions) {
  const auto start = std::chrono::steady_clock::now();
  TempFile tmp("ssc");
  {
    std::ofstream out(tmp.path);
    if (!out) throw IoError("cannot write temporary CNF file " + tmp.path.string());
    if (assumptions.empty()) {
      emit_dimacs(formula, out);
    } else {
      // no assumption protocol over DIMACS: lower them to unit clauses
      out << "p cnf " << formula.num_vars() << ' '
          << formula.num_clauses() + assumptions.size() << '\n';
      for (int lit : assumptions) out << lit << " 0\n";
      for (size_t c = 0; c < formula.num_clauses(); ++c) {
        for (int lit : formula.clause(c)) out << lit << ' ';
        out << "0\n";
      }
    }
  }
  ExternalRun run = run_external(config.external_path, tmp.path.string(), config.time_limit_s);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (run.timed_out) return {SolverVerdict::Kind::timeout, {}, elapsed};
  SolverVerdict verdict = parse_model_text(run.output, formula.num_vars());
  verdict.elapsed_s = elapsed;
  if (verdict.sat()) verify_model(formula, verdict.model, assumptions);
  return verdict;
}

SolverVerdict solve_in_process(CdclSolver& solver, const CnfFormula& formula,
                               const SolverConfig& config, std::span<const int> assumptions) {
  const auto start = std::chrono::steady_clock::now();
  const CdclSolver::Result r =
      solver.solve(assumptions, config.time_limit_s, config.conflict_budget);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  switch (r) {
    case CdclSolver::Result::unsat:
      return {SolverVerdict::Kind::unsat, {}, elapsed};
    case CdclSolver::Result::unknown:
      return {SolverVerdict::Kind::timeout, {}, elapsed};
    case CdclSolver::Result::sat:
      break;
  }
  Model model(static_cast<size_t>(formula.num_vars()) + 1, 0);
  for (int v = 1; v <= formula.num_vars(); ++v) model[v] = solver.model_value(v);
  verify_model(formula, model, assumptions);
  return {SolverVerdict::Kind::sat, std::move(model), elapsed};
}

void load_formula(CdclSolver& solver, const CnfFormula& formula) {
  solver.ensure_vars(formula.num_vars());
  for (size_t c = 0; c < formula.num_clauses(); ++c) {
    std::span<const int32_t> cl = formula.clause(c);
    if (!solver.add_clause(std::span<const int>(cl.data(), cl.size()))) break;
  }
}

}  // namespace

SolverVerdict parse_model_text(const std::string& text, int num_vars) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::optional<bool> sat;
  Model model(static_cast<size_t>(num_vars) + 1, 0);
  auto classify = [&](const std::string& word) -> std::optional<bool> {
    if (word == "SAT" || word == "SATISFIABLE") return true;
    if (word == "UNSAT" || word == "UNSATISFIABLE") return false;
    return std::nullopt;
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "s") {
      std::string word;
      if (!(ls >> word))
        throw ParseError("model line " + std::to_string(line_no) + ": bare 's' line");
      if (word == "UNKNOWN") return {SolverVerdict::Kind::timeout, {}, 0.0};
      const auto k = classify(word);
      if (!k)
        throw ParseError("model line " + std::to_string(line_no) + ": unknown status '" + word + "'");
      sat = *k;
      continue;
    }
    if (auto k = classify(first)) {
      sat = *k;
      continue;
    }
    if (first != "v") ls = std::istringstream(line);  // bare literal line
    int lit;
    while (ls >> lit) {
      if (lit == 0) continue;
      const int v = std::abs(lit);
      if (v > num_vars)
        throw ParseError("model line " + std::to_string(line_no) + ": variable " +
                         std::to_string(v) + " out of range");
      model[v] = lit > 0;
    }
    if (!ls.eof())
      throw ParseError("model line " + std::to_string(line_no) + ": unexpected token");
  }
  if (!sat) throw ParseError("backend output has no SAT/UNSAT status line");
  if (!*sat) return {SolverVerdict::Kind::unsat, {}, 0.0};
  return {SolverVerdict::Kind::sat, std::move(model), 0.0};
}

struct SolverSession::Impl {
  std::unique_ptr<CdclSolver> solver;
};

SolverSession::SolverSession(const CnfFormula& formula, const SolverConfig& config)
    : formula_(formula), config_(config), impl_(std::make_unique<Impl>()) {
  if (config_.backend == SolverConfig::Backend::in_process) {
    impl_->solver = std::make_unique<CdclSolver>();
    load_formula(*impl_->solver, formula_);
  }
}

SolverSession::~SolverSession() = default;

SolverVerdict SolverSession::solve_with(std::span<const int> assumptions,
                                        std::optional<double> time_limit_s) {
  SolverConfig cfg = config_;
  if (time_limit_s) cfg.time_limit_s = *time_limit_s;
  if (cfg.backend == SolverConfig::Backend::external)
    return solve_external(formula_, cfg, assumptions);
  return solve_in_process(*impl_->solver, formula_, cfg, assumptions);
}

SolverVerdict solve(const CnfFormula& formula, const SolverConfig& config) {
  SolverSession session(formula, config);
  return session.solve_with(config.assumptions);
}

}  // namespace ssc
