#pragma once

#include "mads/barrier.hpp"
#include "mads/eval_engine.hpp"
#include "mads/mesh.hpp"
#include "mads/step.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mads {

/// An evaluated point in the algorithm's own space.
struct HistoryEntry {
  Point x;
  Evaluation eval;
};

struct IterationRecord {
  std::int64_t k = 0;
  double frame = 0.0;
  double delta = 0.0;
  SuccessKind success = SuccessKind::Failure;
  double frame_next = 0.0;
  double delta_next = 0.0;
  std::vector<std::int64_t> eval_indices;  // positions in MadsResult::records
  std::vector<Point> generated;            // every candidate produced this iteration
};

/// Shared services a Mads instance runs against. A plain run owns all of
/// them; PSD lanes share cache, budget and log.
struct MadsEnvironment {
  std::shared_ptr<Cache> cache;
  std::shared_ptr<Budget> budget;
  std::shared_ptr<EvalLog> log;
  std::shared_ptr<EvalEngine> engine;
  const std::atomic<bool>* interrupt = nullptr;
  Lift lift;
  int lane = 0;

  EvalContext context() const {
    return EvalContext{cache.get(), budget.get(), log.get(), interrupt, lift, lane};
  }
};

/// Builds a private environment: fresh cache, budget of max_bb_eval, log and
/// an engine over the problem's evaluator.
MadsEnvironment make_environment(const ValidatedProblem& p, const Params& params);

struct MadsState {
  std::int64_t k = 0;
  Mesh mesh;
  Barrier barrier;
  EvalQueue queue;
  std::mt19937_64 rng;
  std::optional<StopReason> stop;
  std::vector<HistoryEntry> history;
  int depth = 0;
  int max_depth = 0;
  bool initialized = false;
};

struct MadsResult {
  std::optional<Incumbent> best_feasible;
  std::optional<Incumbent> best_infeasible;
  std::optional<StopReason> stop;
  std::vector<EvalRecord> records;
  std::vector<IterationRecord> iterations;
  std::int64_t eval_count = 0;  // blackbox evaluations charged to this run
  int max_depth = 0;
};

/// Serializable snapshot for warm restart.
struct RestartSnapshot {
  int n = 0;
  std::vector<OutputKind> output_kinds;
  Params params;
  std::int64_t k = 0;
  double frame = 1.0;
  std::optional<StopReason> stop;
  std::optional<Point> last_success_direction;
  std::string rng_state;
  std::string queue_rng_state;
  std::int64_t queue_counter = 0;
  std::int64_t eval_count = 0;
  std::vector<CacheEntry> cache;
};

class Mads;

/// Hook invoked by the control context after each iteration (hot restart,
/// checkpointing).
using IterationHook = std::function<void(Mads&)>;

/// The Mads algorithm as a component: Start runs Initialization, Run
/// repeats Iteration until Termination reports a stop reason.
class Mads : public Step {
 public:
  Mads(ValidatedProblem problem, Params params, MadsEnvironment env, int depth = 0,
       const Step* parent = nullptr);

  MadsState& state() { return state_; }
  const MadsState& state() const { return state_; }
  const Params& params() const { return params_; }
  const ValidatedProblem& problem() const { return problem_; }
  MadsEnvironment& environment() { return env_; }
  const MadsEnvironment& environment() const { return env_; }
  const MadsResult& result() const { return result_; }

  /// Replaces the mutable parameters of a running instance.
  void set_params(const Params& params);
  void set_iteration_hook(IterationHook hook) { hook_ = std::move(hook); }

  RestartSnapshot snapshot() const;
  /// Rebuilds the state of a previous run from a snapshot: barrier and
  /// history are replayed from the cached evaluations in order.
  void restore(const RestartSnapshot& snap);

  // Building blocks used by the nested components.
  RunQueueResult evaluate(std::vector<TrialPoint> trials, bool opportunistic);
  void absorb(const RunQueueResult& r);
  std::vector<TrialPoint> generate_search(SearchKind kind);
  std::vector<TrialPoint> generate_poll();
  void begin_iteration(IterationRecord rec) { result_.iterations.push_back(std::move(rec)); }
  IterationRecord& current_iteration() { return result_.iterations.back(); }

 protected:
  void start() override;
  void run() override;
  void end() override;

 private:
  ValidatedProblem problem_;
  Params params_;
  MadsEnvironment env_;
  MadsState state_;
  MadsResult result_;
  IterationHook hook_;
};

/// Frame size after an iteration: enlarged on full success, refined on
/// failure, unchanged on partial success. Enlargement respects params.frame_cap.
Mesh update_frame(const Mesh& mesh, SuccessKind kind, const Params& params);

std::optional<StopReason> check_termination(const MadsState& state, const Params& params,
                                            const Budget& budget,
                                            const std::atomic<bool>* interrupt = nullptr);

/// Runs Mads on a private environment.
MadsResult mads_run(const ValidatedProblem& p, const Params& params);

/// Continues a finished run with new parameters. The cache is kept intact,
/// the stop reason cleared; after a mesh-tolerance stop the frame is reset to
/// max(frame, delta0 / 10).
std::unique_ptr<Mads> warm_restart(const ValidatedProblem& p, const RestartSnapshot& snap,
                                   const Params& new_params);

}  // namespace mads
