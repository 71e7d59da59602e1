#pragma once

#include "mads/cache.hpp"
#include "mads/mesh.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mads {

enum class Generator { Initial, Poll, Speculative, Lh, Nm, Quad, PsdPollster, PsdWorker };

const char* to_string(Generator g);

struct TrialPoint {
  Point x;
  Generator generator = Generator::Initial;
  std::optional<Point> direction;
  std::shared_ptr<const Mesh> mesh;
  std::int64_t order = 0;     // insertion counter, set by the queue
  std::uint64_t random_key = 0;
};

/// Maps a point of the algorithm's space to the blackbox space. Identity
/// except for subproblems, where fixed coordinates are filled back in.
using Lift = std::function<Point(const Point&)>;

/// Pending trial points kept as a vector sorted by the active strategy.
class EvalQueue {
 public:
  explicit EvalQueue(OrderingStrategy strategy = OrderingStrategy::LastSuccessDirection,
                     std::uint64_t seed = 0)
      : strategy_(strategy), rng_(seed) {}

  /// Enqueues t unless it is already cached or pending. Sorting is deferred
  /// to sort(), called once per generation burst.
  bool push(const Cache& cache, TrialPoint t, const Lift& lift = {});
  void sort();

  std::vector<TrialPoint> pop_batch(std::size_t max_size);
  void clear() { pending_.clear(); }
  bool empty() const { return pending_.empty(); }
  std::size_t size() const { return pending_.size(); }
  const std::vector<TrialPoint>& pending() const { return pending_; }

  OrderingStrategy strategy() const { return strategy_; }
  void set_strategy(OrderingStrategy s) { strategy_ = s; }
  const std::optional<Point>& last_success_direction() const { return last_success_direction_; }
  void set_last_success_direction(std::optional<Point> d) { last_success_direction_ = std::move(d); }

  std::mt19937_64& rng() { return rng_; }
  const std::mt19937_64& rng() const { return rng_; }
  std::int64_t counter() const { return counter_; }
  void set_counter(std::int64_t c) { counter_ = c; }

 private:
  OrderingStrategy strategy_;
  std::vector<TrialPoint> pending_;
  std::optional<Point> last_success_direction_;
  std::int64_t counter_ = 0;
  std::mt19937_64 rng_;
};

/// Splits the queue front-to-back into batches of at most max_group_size.
std::vector<std::vector<TrialPoint>> group_dispatch(EvalQueue& q, int max_group_size);

}  // namespace mads
