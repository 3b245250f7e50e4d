#pragma once

#include <cstdint>
#include <cstring>
#include <list>
#include <mutex>
#include <optional>
#include <string_view>
#include <unordered_map>

#include "leakwarden/classify.hpp"
#include "leakwarden/digest.hpp"

namespace leakwarden {

struct CacheKey {
  Sha256Digest digest{};

  // Hashes every field that can change a classification, including the
  // classifier and threshold so a switch never serves a stale label.
  static CacheKey of(std::string_view candidate, std::string_view context_before, std::string_view context_after,
                     std::string_view classifier_id, double threshold);
  static CacheKey of(const Candidate& candidate, std::string_view classifier_id, double threshold);

  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept {
    std::size_t h;
    std::memcpy(&h, k.digest.data(), sizeof h);
    return h;
  }
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::size_t size = 0;
  std::size_t capacity = 0;
};

// Fixed-capacity LRU memo of classifier results. All members are safe to
// call concurrently.
class ResultCache {
 public:
  static constexpr std::size_t kDefaultCapacity = 10'000;

  explicit ResultCache(std::size_t capacity = kDefaultCapacity) : capacity_(capacity) {}

  // Promotes the entry to most-recently-used on a hit.
  std::optional<Classification> get(const CacheKey& key);
  // Capacity 0 makes this a no-op.
  void put(const CacheKey& key, Classification value);

  CacheStats stats() const;
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  using Entry = std::pair<CacheKey, Classification>;

  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> order_;  // front = most recently used
  std::unordered_map<CacheKey, std::list<Entry>::iterator, CacheKeyHash> index_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::uint64_t evictions_ = 0;
};

}  // namespace leakwarden
