#include "mads/cli/commands.hpp"

#include "mads/bench/runner.hpp"
#include "mads/cli/cache_file.hpp"
#include "mads/cli/hot_restart.hpp"
#include "mads/cli/outputs.hpp"
#include "mads/cli/process_evaluator.hpp"
#include "mads/psd.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>

namespace mads::cli {

namespace fs = std::filesystem;

namespace {

bool is_param_error(ErrorCode c) {
  return c != ErrorCode::IoError && c != ErrorCode::SpawnFailure;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).string();
}

}  // namespace

Problem bind_blackbox(const SolveConfig& cfg, const std::string& base_dir) {
  Problem p = cfg.problem();
  const std::string prefix = "builtin:";
  if (cfg.bb_exe.rfind(prefix, 0) == 0) {
    const auto bp = bench::ProblemRegistry::instance().make(cfg.bb_exe.substr(prefix.size()));
    if (bp.problem.n != cfg.n || bp.problem.m != p.m)
      throw Error(ErrorCode::IncompatibleParams,
                  cfg.bb_exe + " has n=" + std::to_string(bp.problem.n) +
                      " and m=" + std::to_string(bp.problem.m));
    p.evaluator = bp.problem.evaluator;
    return p;
  }
  auto proc = std::make_shared<ProcessEvaluator>(resolve(cfg.bb_exe, base_dir), cfg.output_kinds);
  p.evaluator = [proc](const Point& x) { return (*proc)(x); };
  p.batch_evaluator = [proc](const std::vector<Point>& xs) { return (*proc)(xs); };
  return p;
}

int solve_command(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    SolveConfig cfg;
    try {
      cfg = parse_params(opts.param_file);
    } catch (const Error& e) {
      err << to_string(e.code()) << ": " << e.what() << "\n";
      return e.code() == ErrorCode::IoError ? kExitIo : kExitParams;
    }
    const std::string base_dir = fs::absolute(opts.param_file).parent_path().string();
    if (opts.seed) cfg.params.seed = *opts.seed;
    if (opts.threads) cfg.params.n_workers = *opts.threads;
    if (opts.cache) cfg.cache_file = *opts.cache;
    check_params(cfg.params);
    const std::string cache_path = resolve(cfg.cache_file, base_dir);
    std::string history_path = resolve(cfg.history_file, base_dir);
    if (opts.csv_dir) {
      fs::create_directories(*opts.csv_dir);
      history_path = (fs::path(*opts.csv_dir) / "history.csv").string();
    }

    const ValidatedProblem problem = validate_problem(bind_blackbox(cfg, base_dir));
    std::optional<RestartSnapshot> previous;
    if (!cache_path.empty() && fs::exists(cache_path)) {
      previous = read_cache_file(cache_path);
      if (previous->n != 0 && (previous->n != problem.n || previous->output_kinds != problem.output_kinds))
        throw Error(ErrorCode::IncompatibleParams, "cache file was written for another problem");
    }

    install_signal_handlers();
    std::optional<HistoryWriter> history;
    if (!history_path.empty()) history.emplace(history_path);

    if (cfg.psd.on) {
      Params params = cfg.params;
      params.n_workers = std::max(params.n_workers, cfg.psd.n_mt);
      MadsEnvironment env = make_environment(problem, params);
      env.interrupt = &interrupt_flag();
      if (previous) {
        for (const auto& e : previous->cache) env.cache->insert(e.x, e.eval);
        env.budget->set_used(previous->eval_count);
        env.log->set_count(previous->eval_count);
      }
      if (history) env.log->add_observer([&](const EvalRecord& r) { (*history)(r); });
      PsdParams psd;
      psd.n_s = cfg.psd.n_s;
      psd.n_mt = cfg.psd.n_mt;
      const PsdResult r = psd_run(problem, params, psd, env);
      if (history) history->flush();
      if (!cache_path.empty()) {
        RestartSnapshot snap;
        snap.n = problem.n;
        snap.output_kinds = problem.output_kinds;
        snap.eval_count = env.budget->used();
        snap.cache = env.cache->entries();
        write_cache_file(cache_path, snap);
      }
      out << solution_line(r.best_feasible, r.best_infeasible) << "\n";
      return kExitOk;
    }

    std::unique_ptr<Mads> mads;
    if (previous && !previous->cache.empty()) {
      mads = warm_restart(problem, *previous, cfg.params);
    } else {
      mads = std::make_unique<Mads>(problem, cfg.params, make_environment(problem, cfg.params));
    }
    auto& env = mads->environment();
    env.interrupt = &interrupt_flag();
    if (history) env.log->add_observer([&](const EvalRecord& r) { (*history)(r); });

    std::int64_t since_checkpoint = 0;
    mads->set_iteration_hook([&](Mads& m) {
      if (hot_restart_flag().exchange(false)) hot_restart(m, cfg, opts.param_file);
      if (!cache_path.empty() && ++since_checkpoint >= opts.checkpoint_every) {
        since_checkpoint = 0;
        if (history) history->flush();
        write_cache_file(cache_path, m.snapshot());
      }
    });
    mads->execute();
    if (history) history->flush();
    if (!cache_path.empty()) write_cache_file(cache_path, mads->snapshot());
    const auto& res = mads->result();
    out << solution_line(res.best_feasible, res.best_infeasible) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << "\n";
    return is_param_error(e.code()) ? kExitParams : kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "IoError: " << e.what() << "\n";
    return kExitIo;
  }
}

int bench_command(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const auto problems = bench::suite_problems(opts.suite);
    std::map<std::string, std::vector<bench::RunRecord>> by_solver;
    std::map<std::string, double> f_best;
    out << std::left << std::setw(14) << "problem" << std::setw(16) << "solver" << std::setw(6)
        << "seed" << std::setw(10) << "evals" << "best_f\n";
    for (const auto& name : problems) {
      const auto bp = bench::ProblemRegistry::instance().make(name);
      if (bp.f_best) f_best[bp.problem.name] = *bp.f_best;
      for (const auto& solver : opts.solvers) {
        std::vector<bench::RunRecord> runs;
        for (int s = 0; s < opts.seeds; ++s) {
          auto rec = bench::run_solver(solver, bp, static_cast<std::uint64_t>(s), opts.budget);
          out << std::setw(14) << rec.problem << std::setw(16) << solver << std::setw(6) << s
              << std::setw(10) << (rec.rows.empty() ? 0 : rec.rows.back().eval_index)
              << bench::format_double(rec.final_best()) << "\n";
          runs.push_back(rec);
          by_solver[solver].push_back(std::move(rec));
        }
        if (opts.csv_dir) {
          fs::create_directories(*opts.csv_dir);
          const int n = bp.problem.n;
          bench::write_envelope_csv(
              (fs::path(*opts.csv_dir) / ("envelope_" + name + "_" + solver + ".csv")).string(),
              bench::convergence_envelope(runs, bench::default_checkpoints(n)));
        }
      }
    }
    const auto profiles = bench::data_profile(by_solver, opts.tau, f_best);
    std::vector<double> kappas;
    for (int k = 0; k <= 100; k += 5) kappas.push_back(k);
    for (const auto& [solver, p] : profiles)
      out << "profile " << solver << " kappa=50: " << p(50.0) << " kappa=100: " << p(100.0) << "\n";
    if (opts.csv_dir)
      bench::write_profile_csv((fs::path(*opts.csv_dir) / "profile.csv").string(), profiles, kappas);
    return kExitOk;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << "\n";
    return is_param_error(e.code()) ? kExitParams : kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "IoError: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace mads::cli
