#include "mads/eval_engine.hpp"

#include <chrono>
#include <map>

namespace mads {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::OpportunisticSuccess: return "OPPORTUNISTIC_SUCCESS";
    case StopReason::BudgetExhausted: return "BUDGET_EXHAUSTED";
    case StopReason::QueueEmpty: return "QUEUE_EMPTY";
    case StopReason::UserInterrupt: return "USER_INTERRUPT";
    case StopReason::MeshTolerance: return "MESH_TOLERANCE";
  }
  return "?";
}

BatchEvaluator batch_of(Evaluator eval, std::size_t m) {
  return [eval = std::move(eval), m](const std::vector<Point>& points) {
    std::vector<Evaluation> out;
    out.reserve(points.size());
    for (const auto& x : points) {
      try {
        out.push_back(eval(x));
      } catch (...) {
        out.push_back(Evaluation::failed(m));
      }
    }
    return out;
  };
}

bool Budget::try_acquire() {
  std::int64_t used = used_.load();
  while (used < limit_.load()) {
    if (used_.compare_exchange_weak(used, used + 1)) {
      if (parent_ && !parent_->try_acquire()) {
        used_.fetch_sub(1);
        return false;
      }
      return true;
    }
  }
  return false;
}

void Budget::give_back() {
  used_.fetch_sub(1);
  if (parent_) parent_->give_back();
}

void EvalLog::add_observer(Observer obs) {
  std::lock_guard lock(mutex_);
  observers_.push_back(std::move(obs));
}

void EvalLog::record(EvalRecord& r) {
  std::lock_guard lock(mutex_);
  r.eval_index = next_++;
  for (auto& obs : observers_) obs(r);
}

std::int64_t EvalLog::count() const {
  std::lock_guard lock(mutex_);
  return next_ - 1;
}

void EvalLog::set_count(std::int64_t c) {
  std::lock_guard lock(mutex_);
  next_ = c + 1;
}

SuccessKind RunQueueResult::best() const {
  SuccessKind best = SuccessKind::Failure;
  for (const auto& r : records) best = std::max(best, r.success);
  return best;
}

EvalEngine::EvalEngine(BatchEvaluator evaluator, std::size_t m, int n_workers,
                       int group_max_size)
    : evaluator_(std::move(evaluator)),
      m_(m),
      n_workers_(std::max(1, n_workers)),
      group_max_size_(std::max(1, group_max_size)) {
  if (n_workers_ > 1) {
    threads_.reserve(static_cast<std::size_t>(n_workers_));
    for (int i = 0; i < n_workers_; ++i)
      threads_.emplace_back([this](std::stop_token st) { worker_loop(st); });
  }
}

EvalEngine::~EvalEngine() {
  for (auto& t : threads_) t.request_stop();
  job_cv_.notify_all();
}

EvalEngine::Done EvalEngine::evaluate(Job job) const {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Evaluation> evals;
  try {
    evals = evaluator_(job.points);
  } catch (...) {
    evals.clear();
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return Done{job.id, std::move(evals), elapsed.count()};
}

void EvalEngine::worker_loop(std::stop_token st) {
  while (true) {
    Job job;
    {
      std::unique_lock lock(mutex_);
      if (!job_cv_.wait(lock, st, [&] { return !jobs_.empty(); })) return;
      job = std::move(jobs_.front());
      jobs_.pop_front();
    }
    Done done = evaluate(std::move(job));
    {
      std::lock_guard lock(mutex_);
      done_.push_back(std::move(done));
    }
    done_cv_.notify_all();
  }
}

RunQueueResult EvalEngine::run_queue(EvalQueue& queue, Barrier& barrier, const EvalContext& ctx,
                                     bool opportunism) {
  RunQueueResult result;
  std::optional<StopReason> reason;
  bool stop_dispatch = false;
  std::uint64_t next_id = 0;
  std::map<std::uint64_t, std::vector<TrialPoint>> in_flight;
  std::deque<Done> inline_done;

  queue.sort();

  auto apply = [&](Done done) {
    auto trials = std::move(in_flight.at(done.id));
    in_flight.erase(done.id);
    for (std::size_t i = 0; i < trials.size(); ++i) {
      EvalRecord rec;
      rec.trial = std::move(trials[i]);
      rec.full_x = ctx.to_full(rec.trial.x);
      // Missing or malformed output counts as a failure.
      if (i < done.evals.size() && done.evals[i].is_ok() && done.evals[i].c.size() == m_)
        rec.eval = std::move(done.evals[i]);
      else
        rec.eval = Evaluation::failed(m_);
      rec.wall_time = done.seconds / static_cast<double>(trials.size());
      rec.lane = ctx.lane;
      ctx.cache->insert(rec.full_x, rec.eval);
      rec.success = barrier.classify(rec.trial.x, rec.eval);
      rec.h = barrier.h_of(rec.eval);
      if (ctx.log) ctx.log->record(rec);
      if (opportunism && rec.success == SuccessKind::Full && !stop_dispatch) {
        stop_dispatch = true;
        reason = StopReason::OpportunisticSuccess;
      }
      result.records.push_back(std::move(rec));
    }
  };

  while (true) {
    while (!stop_dispatch && static_cast<int>(in_flight.size()) < n_workers_ && !queue.empty()) {
      if (ctx.interrupt && ctx.interrupt->load()) {
        stop_dispatch = true;
        reason = StopReason::UserInterrupt;
        break;
      }
      std::vector<TrialPoint> batch;
      std::vector<Point> points;
      while (batch.size() < static_cast<std::size_t>(group_max_size_) && !queue.empty()) {
        auto front = queue.pop_batch(1);
        Point full = ctx.to_full(front[0].x);
        if (!ctx.cache->try_claim(full)) continue;  // evaluated or claimed elsewhere
        if (!ctx.budget->try_acquire()) {
          ctx.cache->release(full);
          stop_dispatch = true;
          reason = StopReason::BudgetExhausted;
          break;
        }
        points.push_back(std::move(full));
        batch.push_back(std::move(front[0]));
      }
      if (batch.empty()) continue;
      const std::uint64_t id = next_id++;
      in_flight.emplace(id, std::move(batch));
      Job job{id, std::move(points)};
      if (threads_.empty()) {
        inline_done.push_back(evaluate(std::move(job)));
      } else {
        {
          std::lock_guard lock(mutex_);
          jobs_.push_back(std::move(job));
        }
        job_cv_.notify_one();
      }
    }
    if (in_flight.empty()) break;

    Done done;
    if (!inline_done.empty()) {
      done = std::move(inline_done.front());
      inline_done.pop_front();
    } else {
      std::unique_lock lock(mutex_);
      done_cv_.wait(lock, [&] { return !done_.empty(); });
      done = std::move(done_.front());
      done_.pop_front();
    }
    apply(std::move(done));
  }

  if (!queue.empty()) queue.clear();
  if (!reason && ctx.budget->exhausted()) reason = StopReason::BudgetExhausted;
  result.reason = reason.value_or(StopReason::QueueEmpty);
  return result;
}

}  // namespace mads
