#include "leakwarden/result_cache.hpp"

#include <cstdio>

namespace leakwarden {

CacheKey CacheKey::of(std::string_view candidate, std::string_view context_before, std::string_view context_after,
                      std::string_view classifier_id, double threshold) {
  char thr[32];
  std::snprintf(thr, sizeof thr, "%.17g", threshold);
  Sha256 h;
  h.field(candidate).field(context_before).field(context_after).field(classifier_id).field(thr);
  return CacheKey{h.finish()};
}

CacheKey CacheKey::of(const Candidate& candidate, std::string_view classifier_id, double threshold) {
  return of(candidate.text, candidate.context.before, candidate.context.after, classifier_id, threshold);
}

std::optional<Classification> ResultCache::get(const CacheKey& key) {
  std::lock_guard lock(mu_);
  const auto it = index_.find(key);
  if (it == index_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

void ResultCache::put(const CacheKey& key, Classification value) {
  if (capacity_ == 0) return;
  std::lock_guard lock(mu_);
  if (const auto it = index_.find(key); it != index_.end()) {
    it->second->second = std::move(value);
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(key, std::move(value));
  index_.emplace(key, order_.begin());
  if (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
    ++evictions_;
  }
}

CacheStats ResultCache::stats() const {
  std::lock_guard lock(mu_);
  return {hits_, misses_, evictions_, order_.size(), capacity_};
}

}  // namespace leakwarden
