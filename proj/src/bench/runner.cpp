#include "mads/bench/runner.hpp"

#include "mads/mads.hpp"
#include "mads/psd.hpp"

#include <algorithm>

namespace mads::bench {

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names{"mads", "mads-nosearch", "mads-eb", "mads-mega",
                                              "psd"};
  return names;
}

std::int64_t default_budget(const BenchProblem& p) {
  return (p.constrained() ? 1000 : 400) * static_cast<std::int64_t>(p.problem.n + 1);
}

RunRecord run_solver(const std::string& solver, const BenchProblem& bp, std::uint64_t seed,
                     std::int64_t budget, int threads) {
  if (std::find(solver_names().begin(), solver_names().end(), solver) == solver_names().end())
    throw Error(ErrorCode::InvalidParams, "unknown solver: " + solver);
  const ValidatedProblem p = validate_problem(bp.problem);
  Params params = default_params(p);
  params.seed = seed;
  params.max_bb_eval = budget > 0 ? budget : default_budget(bp);
  params.n_workers = std::max(1, threads);

  RunRecord rec{p.name, solver, seed, p.n, {}};
  if (solver == "psd") {
    PsdParams psd;
    psd.n_s = std::min(2, p.n);
    params.n_workers = std::max(params.n_workers, psd.n_mt);
    MadsEnvironment env = make_environment(p, params);
    std::vector<EvalRecord> records;
    std::mutex m;
    env.log->add_observer([&](const EvalRecord& r) {
      std::lock_guard lock(m);
      records.push_back(r);
    });
    psd_run(p, params, psd, env);
    rec.rows = history_rows(records);
    return rec;
  }
  if (solver == "mads-nosearch") params.searches_enabled.clear();
  if (solver == "mads-eb") params.barrier_kind = BarrierKind::Extreme;
  if (solver == "mads-mega") params.mega_search_poll = true;
  rec.rows = history_rows(mads_run(p, params).records);
  return rec;
}

std::vector<std::string> suite_problems(const std::string& suite) {
  if (suite == "unconstrained") return {"Sphere2", "Sphere5", "Sphere10", "SRosenbr2", "Quartic10"};
  if (suite == "constrained") return {"CRESCENT10", "DISK10", "SNAKE", "PENTAGON", "HS19"};
  if (suite == "srosenbr") return {"SRosenbr50"};
  if (suite == "all") return ProblemRegistry::instance().names();
  if (ProblemRegistry::instance().contains(suite)) return {suite};
  throw Error(ErrorCode::InvalidParams, "unknown suite: " + suite);
}

}  // namespace mads::bench
