#include "mads/cache.hpp"

#include <cstring>
#include <mutex>

namespace mads {

Cache::Key Cache::key_of(const Point& x) {
  Key key(static_cast<std::size_t>(x.size()) * sizeof(double), '\0');
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i] + 0.0;  // folds -0.0 into +0.0
    std::memcpy(key.data() + i * sizeof(double), &v, sizeof(double));
  }
  return key;
}

std::optional<Evaluation> Cache::lookup(const Point& x) const {
  std::shared_lock lock(mutex_);
  auto it = slots_.find(key_of(x));
  if (it == slots_.end() || !it->second.index) return std::nullopt;
  return completed_[static_cast<std::size_t>(*it->second.index)].eval;
}

bool Cache::contains(const Point& x) const { return lookup(x).has_value(); }

bool Cache::insert(const Point& x, const Evaluation& e) {
  std::unique_lock lock(mutex_);
  auto& slot = slots_[key_of(x)];
  if (slot.index) return false;
  slot.index = static_cast<std::int64_t>(completed_.size());
  completed_.push_back(CacheEntry{x, e, *slot.index});
  return true;
}

bool Cache::try_claim(const Point& x) {
  std::unique_lock lock(mutex_);
  return slots_.try_emplace(key_of(x)).second;
}

void Cache::release(const Point& x) {
  std::unique_lock lock(mutex_);
  auto it = slots_.find(key_of(x));
  if (it != slots_.end() && !it->second.index) slots_.erase(it);
}

std::size_t Cache::size() const {
  std::shared_lock lock(mutex_);
  return completed_.size();
}

std::vector<CacheEntry> Cache::entries() const {
  std::shared_lock lock(mutex_);
  return completed_;
}

}  // namespace mads
