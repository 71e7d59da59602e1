#include "mads/psd.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <thread>

namespace mads {

Point SubspaceAssignment::lift(const Point& sub) const {
  Point full = fixed_values;
  for (std::size_t i = 0; i < indices.size(); ++i) full[indices[i]] = sub[static_cast<Eigen::Index>(i)];
  return full;
}

Point SubspaceAssignment::restrict(const Point& full) const {
  Point sub(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) sub[static_cast<Eigen::Index>(i)] = full[indices[i]];
  return sub;
}

SubspaceAssignment select_subspace(std::mt19937_64& rng, int n, int n_s, const Point& incumbent) {
  if (n_s < 1 || n_s > n) throw Error(ErrorCode::InvalidParams, "n_s must lie in [1, n]");
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  // Partial Fisher-Yates: the first n_s slots are a uniform sample.
  for (int i = 0; i < n_s; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<int> indices(all.begin(), all.begin() + n_s);
  std::sort(indices.begin(), indices.end());
  return SubspaceAssignment{std::move(indices), incumbent};
}

bool master_update(MasterMesh& master, const SessionResult& session) {
  master.coverage.insert(session.indices.begin(), session.indices.end());
  if (session.success == SuccessKind::Full) master.success_since_update = true;
  if (static_cast<int>(master.coverage.size()) < master.coverage_threshold) return false;
  master.mesh = master.success_since_update ? enlarge(master.mesh) : refine(master.mesh);
  master.coverage.clear();
  master.success_since_update = false;
  return true;
}

namespace {

MadsEnvironment session_environment(const PsdShared& shared, std::int64_t budget, Lift lift,
                                    int lane, int n_workers) {
  MadsEnvironment env;
  env.cache = shared.env.cache;
  env.budget = std::make_shared<Budget>(budget, shared.env.budget.get());
  env.log = shared.env.log;
  env.interrupt = shared.env.interrupt;
  env.lift = std::move(lift);
  env.lane = lane;
  const auto& p = shared.problem;
  BatchEvaluator batch = p.batch_evaluator ? p.batch_evaluator
                                           : batch_of(p.evaluator, static_cast<std::size_t>(p.m));
  env.engine = std::make_shared<EvalEngine>(std::move(batch), static_cast<std::size_t>(p.m),
                                            n_workers, shared.params.group_max_size);
  return env;
}

Params session_params(const Params& base, const MasterMesh& master, std::int64_t budget,
                      std::uint64_t seed, int n_workers) {
  Params p = base;
  p.delta0 = master.mesh.frame;
  p.frame_cap = master.mesh.frame;
  p.min_mesh_size = master.mesh.delta;
  p.max_bb_eval = budget;
  p.seed = seed;
  p.n_workers = n_workers;
  p.mega_search_poll = false;
  return p;
}

SessionResult collect(const Mads& mads, int lane, std::vector<int> indices, const Lift& lift) {
  SessionResult s;
  s.lane = lane;
  s.indices = std::move(indices);
  s.records = mads.result().records;
  for (const auto& r : s.records) s.success = std::max(s.success, r.success);
  auto lifted = [&](const std::optional<Incumbent>& inc) -> std::optional<Incumbent> {
    if (!inc) return std::nullopt;
    Incumbent out = *inc;
    out.x = lift ? lift(inc->x) : inc->x;
    return out;
  };
  s.best_feasible = lifted(mads.state().barrier.best_feasible());
  s.best_infeasible = lifted(mads.state().barrier.best_infeasible());
  return s;
}

}  // namespace

SessionResult pollster_run(const PsdShared& shared, const MasterMesh& master,
                           const Barrier& incumbents, std::uint64_t seed, int n_workers) {
  Params params = session_params(shared.params, master, 1, seed, n_workers);
  params.searches_enabled.clear();

  ValidatedProblem p = shared.problem;
  p.x0 = {incumbents.frame_incumbent().x};
  Mads mads(p, params, session_environment(shared, 1, {}, 0, n_workers));
  mads.execute();
  return collect(mads, 0, {}, {});
}

SessionResult worker_run(const PsdShared& shared, const SubspaceAssignment& assignment,
                         const MasterMesh& master, const Barrier& incumbents,
                         std::int64_t budget, std::uint64_t seed, int n_workers, int lane) {
  const ValidatedProblem& full = shared.problem;
  const Params params = session_params(shared.params, master, budget, seed, n_workers);

  Problem sub;
  sub.name = full.name + "/worker";
  sub.n = static_cast<int>(assignment.indices.size());
  sub.m = full.m;
  sub.output_kinds = full.output_kinds;
  sub.lower = assignment.restrict(full.lb());
  sub.upper = assignment.restrict(full.ub());
  sub.x0 = {assignment.restrict(incumbents.frame_incumbent().x)};
  sub.evaluator = [assignment, eval = full.evaluator](const Point& x) { return eval(assignment.lift(x)); };
  const ValidatedProblem vsub = validate_problem(sub);

  Lift lift = [assignment](const Point& x) { return assignment.lift(x); };
  Mads mads(vsub, params, session_environment(shared, budget, lift, lane, n_workers));
  mads.execute();
  return collect(mads, lane, assignment.indices, lift);
}

PsdResult psd_run(const ValidatedProblem& p, const Params& params, const PsdParams& psd,
                  MadsEnvironment env) {
  check_params(params);
  if (psd.n_mt < 2) throw Error(ErrorCode::InvalidParams, "PSD needs at least two main lanes");
  if (psd.n_s < 1 || psd.n_s > p.n) throw Error(ErrorCode::InvalidParams, "n_s must lie in [1, n]");

  if (!env.cache) env.cache = std::make_shared<Cache>();
  if (!env.budget) env.budget = std::make_shared<Budget>(params.max_bb_eval);
  if (!env.log) env.log = std::make_shared<EvalLog>();
  PsdShared shared{p, params, env};

  PsdResult result;
  Barrier global(params.barrier_kind, p.constraint_kinds());

  // Starting points are evaluated by the coordinating context.
  for (const auto& x0 : p.x0) {
    if (auto cached = env.cache->lookup(x0)) {
      global.classify(x0, *cached);
      continue;
    }
    if (!env.cache->try_claim(x0)) continue;
    if (!env.budget->try_acquire()) {
      env.cache->release(x0);
      break;
    }
    Evaluation e;
    try {
      e = p.evaluator(x0);
    } catch (...) {
      e = Evaluation::failed(static_cast<std::size_t>(p.m));
    }
    if (!e.is_ok() || e.c.size() != static_cast<std::size_t>(p.m))
      e = Evaluation::failed(static_cast<std::size_t>(p.m));
    env.cache->insert(x0, e);
    EvalRecord rec;
    rec.trial.x = x0;
    rec.full_x = x0;
    rec.eval = e;
    rec.success = global.classify(x0, e);
    rec.h = global.h_of(e);
    env.log->record(rec);
  }
  if (!global.has_incumbent()) {
    if (env.budget->exhausted()) {
      result.eval_count = env.budget->used();
      return result;
    }
    throw Error(ErrorCode::NoEvaluableStart, "no starting point could be evaluated");
  }

  MasterMesh master;
  master.mesh = make_mesh(global.frame_incumbent().x, params.delta0, params.tau);
  master.coverage_threshold = psd.coverage_threshold > 0 ? psd.coverage_threshold : p.n;

  std::mutex mutex;
  std::atomic<bool> stop{false};
  StopReason stop_reason = StopReason::BudgetExhausted;
  const int extra = std::max(0, params.n_workers - psd.n_mt);

  auto lane_loop = [&](int lane) {
    std::mt19937_64 rng(params.seed * 1000003ULL + static_cast<std::uint64_t>(lane));
    int workers = 1;
    if (lane > 0) workers += extra / (psd.n_mt - 1) + (lane - 1 < extra % (psd.n_mt - 1) ? 1 : 0);
    std::uint64_t session = 0;
    while (!stop.load()) {
      MasterMesh master_view;
      Barrier incumbents;
      {
        std::lock_guard lock(mutex);
        master_view = master;
        incumbents = global;
      }
      const std::uint64_t seed = rng();
      SessionResult s;
      if (lane == 0) {
        s = pollster_run(shared, master_view, incumbents, seed, workers);
      } else {
        auto assignment = select_subspace(rng, p.n, psd.n_s, incumbents.frame_incumbent().x);
        s = worker_run(shared, assignment, master_view, incumbents, psd.worker_budget, seed,
                       workers, lane);
      }
      ++session;
      std::lock_guard lock(mutex);
      for (const auto& r : s.records) global.classify(r.full_x, r.eval);
      ++result.sessions;
      const double old_frame = master.mesh.frame;
      if (master_update(master, s))
        result.master_history.push_back({env.budget->used(), master.mesh.frame,
                                         master.mesh.delta, master.mesh.frame > old_frame});
      master.mesh.center = global.frame_incumbent().x;
      if (env.interrupt && env.interrupt->load()) {
        stop_reason = StopReason::UserInterrupt;
        stop = true;
      } else if (env.budget->exhausted()) {
        stop_reason = StopReason::BudgetExhausted;
        stop = true;
      } else if (master.mesh.frame < params.eps_stop) {
        stop_reason = StopReason::MeshTolerance;
        stop = true;
      }
      if (s.records.empty()) std::this_thread::yield();
    }
  };

  {
    std::vector<std::jthread> lanes;
    for (int lane = 0; lane < psd.n_mt; ++lane) lanes.emplace_back(lane_loop, lane);
  }

  result.best_feasible = global.best_feasible();
  result.best_infeasible = global.best_infeasible();
  result.eval_count = env.budget->used();
  result.stop = stop_reason;
  return result;
}

}  // namespace mads
