#include "mads/mads.hpp"

#include "mads/searches.hpp"

#include <sstream>

namespace mads {

MadsEnvironment make_environment(const ValidatedProblem& p, const Params& params) {
  MadsEnvironment env;
  env.cache = std::make_shared<Cache>();
  env.budget = std::make_shared<Budget>(params.max_bb_eval);
  env.log = std::make_shared<EvalLog>();
  BatchEvaluator batch = p.batch_evaluator ? p.batch_evaluator
                                           : batch_of(p.evaluator, static_cast<std::size_t>(p.m));
  env.engine = std::make_shared<EvalEngine>(std::move(batch), static_cast<std::size_t>(p.m),
                                            params.n_workers, params.group_max_size);
  return env;
}

Mesh update_frame(const Mesh& mesh, SuccessKind kind, const Params& params) {
  switch (kind) {
    case SuccessKind::Full: {
      Mesh out = enlarge(mesh);
      if (out.frame > params.frame_cap) {
        out.frame = std::max(mesh.frame, params.frame_cap);
        out.delta = update_mesh_size(out.frame);
      }
      return out;
    }
    case SuccessKind::Failure: return refine(mesh);
    case SuccessKind::Partial: return mesh;
  }
  return mesh;
}

std::optional<StopReason> check_termination(const MadsState& state, const Params& params,
                                            const Budget& budget,
                                            const std::atomic<bool>* interrupt) {
  if (interrupt && interrupt->load()) return StopReason::UserInterrupt;
  if (budget.exhausted()) return StopReason::BudgetExhausted;
  if (state.mesh.frame < params.eps_stop) return StopReason::MeshTolerance;
  if (state.mesh.delta < params.min_mesh_size) return StopReason::MeshTolerance;
  return std::nullopt;
}

namespace {

class Initialization : public Step {
 public:
  explicit Initialization(Mads& mads) : Step("Initialization", &mads), mads_(mads) {}

 protected:
  void run() override {
    auto& st = mads_.state();
    const auto& p = mads_.problem();
    const auto& env = mads_.environment();
    st.mesh = make_mesh(p.x0.front(), mads_.params().delta0, mads_.params().tau);

    std::vector<TrialPoint> fresh;
    for (const auto& x0 : p.x0) {
      const Point full = env.lift ? env.lift(x0) : x0;
      if (auto cached = env.cache->lookup(full)) {
        st.barrier.classify(x0, *cached);
        st.history.push_back({x0, *cached});
        continue;
      }
      TrialPoint t;
      t.x = x0;
      t.generator = Generator::Initial;
      t.mesh = std::make_shared<const Mesh>(st.mesh);
      fresh.push_back(std::move(t));
    }
    const auto r = mads_.evaluate(std::move(fresh), false);

    if (!st.barrier.has_incumbent()) {
      if (r.reason == StopReason::BudgetExhausted || r.reason == StopReason::UserInterrupt) {
        st.stop = r.reason;
        return;
      }
      throw Error(ErrorCode::NoEvaluableStart, "no starting point could be evaluated");
    }
    st.mesh.center = st.barrier.frame_incumbent().x;
    st.initialized = true;
  }

 private:
  Mads& mads_;
};

class Update : public Step {
 public:
  explicit Update(Mads& mads, const Step* parent) : Step("Update", parent), mads_(mads) {}

 protected:
  void run() override {
    auto& st = mads_.state();
    st.mesh.center = st.barrier.frame_incumbent().x;
    st.mesh.delta = update_mesh_size(st.mesh.frame);
  }

 private:
  Mads& mads_;
};

/// Search or poll: Start generates, Run evaluates.
class GenerateEvaluate : public Step {
 public:
  using Generate = std::function<std::vector<TrialPoint>()>;

  GenerateEvaluate(std::string name, Mads& mads, Generate gen, const Step* parent)
      : Step(std::move(name), parent), mads_(mads), gen_(std::move(gen)) {}

  const RunQueueResult& outcome() const { return outcome_; }

 protected:
  void start() override { trials_ = gen_(); }
  void run() override { outcome_ = mads_.evaluate(std::move(trials_), true); }

 private:
  Mads& mads_;
  Generate gen_;
  std::vector<TrialPoint> trials_;
  RunQueueResult outcome_;
};

bool interrupted_run(StopReason r) {
  return r == StopReason::BudgetExhausted || r == StopReason::UserInterrupt;
}

class Iteration : public Step {
 public:
  explicit Iteration(Mads& mads) : Step("Iteration", &mads), mads_(mads) {}

 protected:
  void start() override {
    Update(mads_, this).execute();
    auto& st = mads_.state();
    IterationRecord rec;
    rec.k = st.k;
    rec.frame = st.mesh.frame;
    rec.delta = st.mesh.delta;
    mads_.begin_iteration(std::move(rec));
  }

  void run() override {
    const auto& params = mads_.params();
    if (params.mega_search_poll) {
      GenerateEvaluate mega("MegaSearchPoll", mads_, [&] { return mega_search_poll_points(mads_); },
                            this);
      mega.execute();
      best_ = mega.outcome().best();
      return;
    }
    for (SearchKind kind :
         {SearchKind::Speculative, SearchKind::Lh, SearchKind::Nm, SearchKind::Quad}) {
      if (!params.searches_enabled.count(kind)) continue;
      GenerateEvaluate search(std::string("Search/") + to_string(kind), mads_,
                              [&] { return mads_.generate_search(kind); }, this);
      search.execute();
      best_ = std::max(best_, search.outcome().best());
      if (best_ == SuccessKind::Full && params.opportunism) return;
      if (interrupted_run(search.outcome().reason)) return;
    }
    GenerateEvaluate poll("Poll", mads_, [&] { return mads_.generate_poll(); }, this);
    poll.execute();
    best_ = std::max(best_, poll.outcome().best());
  }

  void end() override {
    auto& st = mads_.state();
    const Point old_center = st.mesh.center;
    st.mesh = update_frame(st.mesh, best_, mads_.params());
    st.mesh.center = st.barrier.frame_incumbent().x;
    if (best_ == SuccessKind::Full) {
      Point dir = st.mesh.center - old_center;
      if (!dir.isZero(0.0)) st.queue.set_last_success_direction(std::move(dir));
    }
    auto& rec = mads_.current_iteration();
    rec.success = best_;
    rec.frame_next = st.mesh.frame;
    rec.delta_next = st.mesh.delta;
    ++st.k;
  }

 private:
  Mads& mads_;
  SuccessKind best_ = SuccessKind::Failure;
};

}  // namespace

Mads::Mads(ValidatedProblem problem, Params params, MadsEnvironment env, int depth,
           const Step* parent)
    : Step("Mads", parent),
      problem_(std::move(problem)),
      params_(std::move(params)),
      env_(std::move(env)) {
  check_params(params_);
  state_.barrier = Barrier(params_.barrier_kind, problem_.constraint_kinds());
  state_.queue = EvalQueue(params_.ordering, params_.seed ^ 0x9e3779b97f4a7c15ULL);
  state_.rng.seed(params_.seed);
  state_.depth = depth;
  state_.max_depth = depth;
  state_.mesh = make_mesh(problem_.x0.front(), params_.delta0, params_.tau);
}

void Mads::set_params(const Params& params) {
  check_params(params);
  params_ = params;
  env_.budget->set_limit(params.max_bb_eval);
  env_.engine->set_group_max_size(params.group_max_size);
  state_.queue.set_strategy(params.ordering);
}

RunQueueResult Mads::evaluate(std::vector<TrialPoint> trials, bool opportunistic) {
  if (!result_.iterations.empty() && state_.initialized)
    for (const auto& t : trials) current_iteration().generated.push_back(t.x);
  for (auto& t : trials) state_.queue.push(*env_.cache, std::move(t), env_.lift);
  auto r = env_.engine->run_queue(state_.queue, state_.barrier, env_.context(),
                                  opportunistic && params_.opportunism);
  absorb(r);
  return r;
}

void Mads::absorb(const RunQueueResult& r) {
  for (const auto& rec : r.records) {
    state_.history.push_back({rec.trial.x, rec.eval});
    if (!result_.iterations.empty() && state_.initialized)
      current_iteration().eval_indices.push_back(static_cast<std::int64_t>(result_.records.size()));
    result_.records.push_back(rec);
    ++result_.eval_count;
  }
}

std::vector<TrialPoint> Mads::generate_search(SearchKind kind) {
  const auto& lb = problem_.lb();
  const auto& ub = problem_.ub();
  switch (kind) {
    case SearchKind::Speculative:
      return speculative_search_points(state_.mesh, state_.queue.last_success_direction(),
                                       params_.speculative_count, lb, ub);
    case SearchKind::Lh: {
      const int count = params_.lh_count > 0 ? params_.lh_count : problem_.n;
      return lh_search_points(problem_, count, state_.rng, params_.delta0, &state_.mesh);
    }
    case SearchKind::Nm:
      return nm_search_points(state_.history, state_.barrier, state_.mesh, params_.nm_max_points,
                              lb, ub);
    case SearchKind::Quad: {
      int depth = state_.depth;
      auto pts = quad_model_search_points(*this, &depth);
      state_.max_depth = std::max(state_.max_depth, depth);
      return pts;
    }
  }
  return {};
}

std::vector<TrialPoint> Mads::generate_poll() {
  return poll_points(state_.mesh, state_.rng, problem_.lb(), problem_.ub());
}

void Mads::start() {
  if (!state_.initialized && !state_.stop) Initialization(*this).execute();
}

void Mads::run() {
  if (!state_.stop) state_.stop = check_termination(state_, params_, *env_.budget, env_.interrupt);
  while (!state_.stop) {
    Iteration(*this).execute();
    state_.stop = check_termination(state_, params_, *env_.budget, env_.interrupt);
    if (hook_) {
      hook_(*this);
      state_.stop = check_termination(state_, params_, *env_.budget, env_.interrupt);
    }
  }
}

void Mads::end() {
  result_.best_feasible = state_.barrier.best_feasible();
  result_.best_infeasible = state_.barrier.best_infeasible();
  result_.stop = state_.stop;
  result_.max_depth = state_.max_depth;
}

RestartSnapshot Mads::snapshot() const {
  RestartSnapshot snap;
  snap.n = problem_.n;
  snap.output_kinds = problem_.output_kinds;
  snap.params = params_;
  snap.k = state_.k;
  snap.frame = state_.mesh.frame;
  snap.stop = state_.stop;
  snap.last_success_direction = state_.queue.last_success_direction();
  std::ostringstream rng, qrng;
  rng << state_.rng;
  qrng << state_.queue.rng();
  snap.rng_state = rng.str();
  snap.queue_rng_state = qrng.str();
  snap.queue_counter = state_.queue.counter();
  snap.eval_count = env_.budget->used();
  snap.cache = env_.cache->entries();
  return snap;
}

void Mads::restore(const RestartSnapshot& snap) {
  state_.history.clear();
  state_.barrier = Barrier(params_.barrier_kind, problem_.constraint_kinds());
  for (const auto& e : snap.cache) {
    state_.barrier.classify(e.x, e.eval);
    state_.history.push_back({e.x, e.eval});
  }
  state_.k = snap.k;
  state_.stop = snap.stop;
  state_.queue.set_last_success_direction(snap.last_success_direction);
  state_.queue.set_counter(snap.queue_counter);
  if (!snap.rng_state.empty()) {
    std::istringstream in(snap.rng_state);
    in >> state_.rng;
  }
  if (!snap.queue_rng_state.empty()) {
    std::istringstream in(snap.queue_rng_state);
    in >> state_.queue.rng();
  }
  if (state_.barrier.has_incumbent()) {
    state_.mesh = make_mesh(state_.barrier.frame_incumbent().x, snap.frame, params_.tau);
    state_.initialized = true;
  }
}

MadsResult mads_run(const ValidatedProblem& p, const Params& params) {
  Mads mads(p, params, make_environment(p, params));
  mads.execute();
  return mads.result();
}

std::unique_ptr<Mads> warm_restart(const ValidatedProblem& p, const RestartSnapshot& snap,
                                   const Params& new_params) {
  if (snap.n != p.n || snap.output_kinds != p.output_kinds)
    throw Error(ErrorCode::IncompatibleParams, "dimension or output kinds differ from snapshot");
  MadsEnvironment env = make_environment(p, new_params);
  for (const auto& e : snap.cache) env.cache->insert(e.x, e.eval);
  env.budget->set_used(snap.eval_count);
  env.log->set_count(snap.eval_count);

  auto mads = std::make_unique<Mads>(p, new_params, std::move(env));
  mads->restore(snap);
  auto& st = mads->state();
  if (snap.stop == StopReason::MeshTolerance && st.initialized) {
    st.mesh.frame = std::max(st.mesh.frame, new_params.delta0 / 10.0);
    st.mesh.delta = update_mesh_size(st.mesh.frame);
  }
  st.stop.reset();
  return mads;
}

}  // namespace mads
