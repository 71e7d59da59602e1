#pragma once

#include "mads/core.hpp"

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace mads {

struct CacheEntry {
  Point x;
  Evaluation eval;
  std::int64_t index = 0;  // completion order
};

/// All past evaluations keyed by exact coordinates.
///
/// Safe for concurrent use. A point may be claimed before its evaluation is
/// dispatched; a claimed point is invisible to lookups and cannot be claimed
/// again, so two lanes never evaluate the same point.
class Cache {
 public:
  std::optional<Evaluation> lookup(const Point& x) const;
  bool contains(const Point& x) const;

  /// Records an evaluation. Returns false (and keeps the first value) when
  /// the point already has one.
  bool insert(const Point& x, const Evaluation& e);

  /// Reserves x for evaluation. False if already evaluated or claimed.
  bool try_claim(const Point& x);
  void release(const Point& x);

  std::size_t size() const;
  /// Completed entries in completion order.
  std::vector<CacheEntry> entries() const;

 private:
  using Key = std::string;
  static Key key_of(const Point& x);

  struct Slot {
    std::optional<std::int64_t> index;
  };

  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Slot> slots_;
  std::vector<CacheEntry> completed_;
};

}  // namespace mads
