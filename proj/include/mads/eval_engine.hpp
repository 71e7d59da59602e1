#pragma once

#include "mads/barrier.hpp"
#include "mads/cache.hpp"
#include "mads/eval_queue.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace mads {

enum class StopReason { OpportunisticSuccess, BudgetExhausted, QueueEmpty, UserInterrupt, MeshTolerance };

const char* to_string(StopReason r);

/// Wraps a single-point evaluator. Exceptions become FAILED evaluations.
BatchEvaluator batch_of(Evaluator eval, std::size_t m);

/// Evaluation budget. Thread safe. A budget with a parent also draws from
/// the parent, so a session budget can sit inside a global one.
class Budget {
 public:
  explicit Budget(std::int64_t limit, Budget* parent = nullptr)
      : limit_(limit), parent_(parent) {}

  bool try_acquire();
  void give_back();
  std::int64_t used() const { return used_.load(); }
  std::int64_t limit() const { return limit_.load(); }
  std::int64_t remaining() const { return std::max<std::int64_t>(0, limit() - used()); }
  bool exhausted() const { return used() >= limit() || (parent_ && parent_->exhausted()); }
  void set_limit(std::int64_t limit) { limit_.store(limit); }
  void set_used(std::int64_t used) { used_.store(used); }

 private:
  std::atomic<std::int64_t> limit_;
  std::atomic<std::int64_t> used_{0};
  Budget* parent_;
};

struct EvalRecord {
  TrialPoint trial;
  Point full_x;
  Evaluation eval;
  SuccessKind success = SuccessKind::Failure;
  double h = kInf;
  std::int64_t eval_index = 0;  // 1-based, in application order
  double wall_time = 0.0;       // seconds spent in the blackbox
  int lane = 0;
};

/// Ordered stream of applied evaluations. Indices are assigned and observers
/// notified under one lock, so the stream is totally ordered across lanes.
class EvalLog {
 public:
  using Observer = std::function<void(const EvalRecord&)>;

  void add_observer(Observer obs);
  void record(EvalRecord& r);
  std::int64_t count() const;
  void set_count(std::int64_t c);

 private:
  mutable std::mutex mutex_;
  std::int64_t next_ = 1;
  std::vector<Observer> observers_;
};

/// Everything a run shares with other runs: cache, budget and output stream.
struct EvalContext {
  Cache* cache = nullptr;
  Budget* budget = nullptr;
  EvalLog* log = nullptr;
  const std::atomic<bool>* interrupt = nullptr;
  Lift lift;
  int lane = 0;

  Point to_full(const Point& x) const { return lift ? lift(x) : x; }
};

struct RunQueueResult {
  std::vector<EvalRecord> records;
  StopReason reason = StopReason::QueueEmpty;

  SuccessKind best() const;
};

/// Dispatches queued points to up to n_workers concurrent evaluation workers.
///
/// Completed evaluations are cached and classified by the caller's barrier in
/// completion order on the calling thread. On an opportunistic success no new
/// batches are dispatched; batches already in flight complete and are
/// recorded, and the queue is cleared.
class EvalEngine {
 public:
  EvalEngine(BatchEvaluator evaluator, std::size_t m, int n_workers, int group_max_size);
  ~EvalEngine();
  EvalEngine(const EvalEngine&) = delete;
  EvalEngine& operator=(const EvalEngine&) = delete;

  RunQueueResult run_queue(EvalQueue& queue, Barrier& barrier, const EvalContext& ctx,
                           bool opportunism);

  int n_workers() const { return n_workers_; }
  void set_group_max_size(int g) { group_max_size_ = std::max(1, g); }

 private:
  struct Job {
    std::uint64_t id;
    std::vector<Point> points;
  };
  struct Done {
    std::uint64_t id;
    std::vector<Evaluation> evals;
    double seconds;
  };

  Done evaluate(Job job) const;
  void worker_loop(std::stop_token st);

  BatchEvaluator evaluator_;
  std::size_t m_;
  int n_workers_;
  int group_max_size_;

  std::mutex mutex_;
  std::condition_variable_any job_cv_;
  std::condition_variable done_cv_;
  std::deque<Job> jobs_;
  std::deque<Done> done_;
  std::vector<std::jthread> threads_;
};

}  // namespace mads
