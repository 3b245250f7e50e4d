#include "leakwarden/result_cache.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "reference_lru.hpp"

using namespace leakwarden;

namespace {

CacheKey key(int i) { return CacheKey::of("cand" + std::to_string(i), "before", "after", "heuristic-v1", 0.5); }

Classification value(int i) { return make_classification(i / 100.0, 0.5, "heuristic-v1"); }

}  // namespace

TEST(CacheKey, EveryFieldChangesTheKey) {
  const auto base = CacheKey::of("c", "b", "a", "id", 0.5);
  EXPECT_EQ(base, CacheKey::of("c", "b", "a", "id", 0.5));
  EXPECT_NE(base, CacheKey::of("x", "b", "a", "id", 0.5));
  EXPECT_NE(base, CacheKey::of("c", "x", "a", "id", 0.5));
  EXPECT_NE(base, CacheKey::of("c", "b", "x", "id", 0.5));
  EXPECT_NE(base, CacheKey::of("c", "b", "a", "other", 0.5));
  EXPECT_NE(base, CacheKey::of("c", "b", "a", "id", 0.6));
}

TEST(CacheKey, FieldBoundariesAreUnambiguous) {
  EXPECT_NE(CacheKey::of("ab", "c", "", "id", 0.5), CacheKey::of("a", "bc", "", "id", 0.5));
  EXPECT_NE(CacheKey::of("", "ab", "", "id", 0.5), CacheKey::of("", "", "ab", "id", 0.5));
}

TEST(ResultCache, HitAfterPutAndStats) {
  ResultCache cache(4);
  EXPECT_FALSE(cache.get(key(1)));
  cache.put(key(1), value(1));
  EXPECT_EQ(cache.get(key(1)), value(1));
  const auto s = cache.stats();
  EXPECT_EQ(s.hits, 1u);
  EXPECT_EQ(s.misses, 1u);
  EXPECT_EQ(s.size, 1u);
  EXPECT_EQ(s.capacity, 4u);
}

TEST(ResultCache, EvictsLeastRecentlyUsed) {
  ResultCache cache(2);
  cache.put(key(1), value(1));
  cache.put(key(2), value(2));
  ASSERT_TRUE(cache.get(key(1)));
  cache.put(key(3), value(3));
  EXPECT_TRUE(cache.get(key(1)));
  EXPECT_FALSE(cache.get(key(2)));
  EXPECT_TRUE(cache.get(key(3)));
  EXPECT_EQ(cache.stats().evictions, 1u);
}

TEST(ResultCache, ZeroCapacityStoresNothing) {
  ResultCache cache(0);
  cache.put(key(1), value(1));
  EXPECT_FALSE(cache.get(key(1)));
  EXPECT_EQ(cache.stats().size, 0u);
}

TEST(ResultCache, AgreesWithReferenceLruOnRandomSequences) {
  std::mt19937_64 rng(17);
  for (int seq = 0; seq < 2000; ++seq) {
    const std::size_t capacity = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
    const int universe = std::uniform_int_distribution<int>(1, 12)(rng);
    ResultCache cache(capacity);
    lwtest::ReferenceLru<int, double> ref(capacity);
    std::uint64_t evictions = 0;
    for (int op = 0; op < 60; ++op) {
      const int k = std::uniform_int_distribution<int>(0, universe - 1)(rng);
      if (rng() % 2 == 0) {
        const auto got = cache.get(key(k));
        const auto want = ref.get(k);
        ASSERT_EQ(got.has_value(), want.has_value()) << "seq " << seq << " op " << op;
        if (got) ASSERT_EQ(got->confidence, *want);
      } else {
        cache.put(key(k), value(op));
        if (ref.put(k, value(op).confidence)) ++evictions;
      }
      ASSERT_LE(cache.stats().size, capacity);
      ASSERT_EQ(cache.stats().size, ref.size());
    }
    EXPECT_EQ(cache.stats().evictions, evictions);
  }
}

TEST(ResultCache, ConcurrentUseKeepsInvariants) {
  ResultCache cache(64);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&cache, t] {
      std::mt19937 rng(static_cast<unsigned>(t));
      for (int i = 0; i < 5000; ++i) {
        const int k = static_cast<int>(rng() % 200);
        if (const auto v = cache.get(key(k))) {
          EXPECT_EQ(*v, value(k));
        } else {
          cache.put(key(k), value(k));
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  const auto s = cache.stats();
  EXPECT_EQ(s.hits + s.misses, 8u * 5000u);
  EXPECT_LE(s.size, 64u);
}
