#include "mads/eval_queue.hpp"

#include <algorithm>

namespace mads {

const char* to_string(Generator g) {
  switch (g) {
    case Generator::Initial: return "initial";
    case Generator::Poll: return "poll";
    case Generator::Speculative: return "speculative-search";
    case Generator::Lh: return "lh-search";
    case Generator::Nm: return "nm-search";
    case Generator::Quad: return "quad-search";
    case Generator::PsdPollster: return "psd-pollster";
    case Generator::PsdWorker: return "psd-worker";
  }
  return "?";
}

bool EvalQueue::push(const Cache& cache, TrialPoint t, const Lift& lift) {
  if (cache.contains(lift ? lift(t.x) : t.x)) return false;
  for (const auto& p : pending_)
    if ((p.x.array() == t.x.array()).all()) return false;
  t.order = counter_++;
  t.random_key = rng_();
  pending_.push_back(std::move(t));
  return true;
}

namespace {

double cosine(const Point& a, const Point& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace

void EvalQueue::sort() {
  const auto by_order = [](const TrialPoint& a, const TrialPoint& b) { return a.order < b.order; };
  switch (strategy_) {
    case OrderingStrategy::GenerationOrder:
      std::sort(pending_.begin(), pending_.end(), by_order);
      break;
    case OrderingStrategy::Lexicographic:
      std::sort(pending_.begin(), pending_.end(), [&](const TrialPoint& a, const TrialPoint& b) {
        if (std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end()))
          return true;
        if (std::lexicographical_compare(b.x.begin(), b.x.end(), a.x.begin(), a.x.end()))
          return false;
        return by_order(a, b);
      });
      break;
    case OrderingStrategy::Random:
      std::sort(pending_.begin(), pending_.end(), [&](const TrialPoint& a, const TrialPoint& b) {
        if (a.random_key != b.random_key) return a.random_key < b.random_key;
        return by_order(a, b);
      });
      break;
    case OrderingStrategy::LastSuccessDirection: {
      if (!last_success_direction_) {
        std::sort(pending_.begin(), pending_.end(), by_order);
        break;
      }
      const Point& d = *last_success_direction_;
      // Points without a generating direction rank last.
      auto score = [&](const TrialPoint& t) {
        return t.direction ? cosine(*t.direction, d) : -kInf;
      };
      std::vector<std::pair<double, std::size_t>> keyed;
      keyed.reserve(pending_.size());
      for (std::size_t i = 0; i < pending_.size(); ++i) keyed.emplace_back(score(pending_[i]), i);
      std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return pending_[a.second].order < pending_[b.second].order;
      });
      std::vector<TrialPoint> sorted;
      sorted.reserve(pending_.size());
      for (const auto& [s, i] : keyed) sorted.push_back(std::move(pending_[i]));
      pending_ = std::move(sorted);
      break;
    }
  }
}

std::vector<TrialPoint> EvalQueue::pop_batch(std::size_t max_size) {
  const std::size_t count = std::min(max_size, pending_.size());
  std::vector<TrialPoint> batch(std::make_move_iterator(pending_.begin()),
                                std::make_move_iterator(pending_.begin() + count));
  pending_.erase(pending_.begin(), pending_.begin() + count);
  return batch;
}

std::vector<std::vector<TrialPoint>> group_dispatch(EvalQueue& q, int max_group_size) {
  std::vector<std::vector<TrialPoint>> batches;
  const auto size = static_cast<std::size_t>(std::max(1, max_group_size));
  while (!q.empty()) batches.push_back(q.pop_batch(size));
  return batches;
}

}  // namespace mads
