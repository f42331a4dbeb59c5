#include "graphssl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"

using namespace graphssl;

TEST_SUITE_BEGIN("rng");

TEST_CASE("counter-based outputs equal the sequential walk") {
  // splitmix64_at(s, k) must be exactly the k-th output of the classic
  // sequential generator (state += gamma; mix(state)) started from s.
  const std::uint64_t stream = 0x1234'5678'9abc'def0ull;
  std::uint64_t state = stream;
  for (std::uint64_t k = 0; k < 64; ++k) {
    state += kSplitMix64Gamma;
    CHECK(splitmix64_at(stream, k) == splitmix64_mix(state));
  }
}

TEST_CASE("mt19937_64 engine is the standard-pinned sequence") {
  // The C++ standard pins the 10000th output of the default-seeded engine;
  // SplitRng must expose the raw engine sequence unchanged.
  SplitRng rng(5489u);
  std::uint64_t value = 0;
  for (int i = 0; i < 10000; ++i) value = rng.next_bits();
  CHECK(value == 9981545732273789042ull);
}

TEST_CASE("mix_seed separates roles and indices") {
  const std::uint64_t root = 42;
  std::set<std::uint64_t> seen;
  for (std::uint64_t role : {kRoleGraphGen, kRoleSeedSample, kRoleValSample,
                             kRoleNearestSeedIter, kRoleBootstrapStep,
                             kRoleSweepCell, kRoleAbSplit}) {
    for (std::uint64_t idx = 0; idx < 8; ++idx) {
      seen.insert(mix_seed(root, role, idx));
    }
  }
  CHECK(seen.size() == 7 * 8);  // all child seeds distinct
  CHECK(mix_seed(root, kRoleGraphGen, 3) == mix_seed(root, kRoleGraphGen, 3));
  CHECK(mix_seed(root, kRoleGraphGen) != mix_seed(root + 1, kRoleGraphGen));
  // Argument order matters: (a, b) and (b, a) are different streams.
  CHECK(mix_seed(root, 1, 2) != mix_seed(root, 2, 1));
}

TEST_CASE("to_unit_open_closed maps into (0, 1]") {
  CHECK(to_unit_open_closed(0) == doctest::Approx(0x1.0p-53));
  CHECK(to_unit_open_closed(0) > 0.0);
  CHECK(to_unit_open_closed(~0ull) == 1.0);
  CHECK(std::isfinite(std::log(to_unit_open_closed(0))));
  // Monotone in the top bits.
  CHECK(to_unit_open_closed(1ull << 63) > to_unit_open_closed(1ull << 62));
}

TEST_CASE("uniform draws look uniform") {
  SplitRng rng(7);
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    sum += u;
  }
  // Mean 1/2, stddev of the mean = 1/sqrt(12 n); allow 4 sigma.
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("below is unbiased and in range") {
  SplitRng rng(11);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
  for (int i = 0; i < 100; ++i) CHECK(rng.below(1) == 0);

  const std::uint64_t bound = 10;
  const int n = 50000;
  std::vector<int> hist(bound, 0);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = rng.below(bound);
    REQUIRE(v < bound);
    ++hist[v];
  }
  const double expected = static_cast<double>(n) / bound;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / bound));
  for (std::uint64_t v = 0; v < bound; ++v) {
    CHECK(std::abs(hist[v] - expected) < 4.0 * sigma);
  }
}

TEST_CASE("exponential has the requested mean") {
  SplitRng rng(13);
  const double mean = 3.5;
  const int n = 40000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(mean);
    CHECK(x >= 0.0);
    sum += x;
  }
  // stddev of the sample mean is mean/sqrt(n); allow 4 sigma.
  CHECK(std::abs(sum / n - mean) < 4.0 * mean / std::sqrt(n));
}

TEST_CASE("sample_without_replacement basics") {
  const std::vector<std::int32_t> pool{5, 9, 2, 7, 1};
  SplitRng rng(3);

  SUBCASE("k greater than the pool throws") {
    CHECK_THROWS_AS(sample_without_replacement(pool, 6, rng),
                    std::invalid_argument);
  }
  SUBCASE("k equal to the pool is a permutation") {
    const auto all = sample_without_replacement(pool, pool.size(), rng);
    auto sorted_all = all;
    auto sorted_pool = pool;
    std::sort(sorted_all.begin(), sorted_all.end());
    std::sort(sorted_pool.begin(), sorted_pool.end());
    CHECK(sorted_all == sorted_pool);
  }
  SUBCASE("draws are distinct pool members") {
    const auto got = sample_without_replacement(pool, 3, rng);
    CHECK(got.size() == 3);
    std::set<std::int32_t> unique(got.begin(), got.end());
    CHECK(unique.size() == 3);
    for (std::int32_t v : got) {
      CHECK(std::count(pool.begin(), pool.end(), v) == 1);
    }
  }
  SUBCASE("the pool itself is not mutated") {
    const auto copy = pool;
    (void)sample_without_replacement(pool, 2, rng);
    CHECK(pool == copy);
  }
  SUBCASE("fixed seed reproduces the draw") {
    SplitRng a(99), b(99);
    CHECK(sample_without_replacement(pool, 3, a) ==
          sample_without_replacement(pool, 3, b));
  }
}

TEST_CASE("sample_without_replacement is uniform over single draws") {
  const std::vector<std::int32_t> pool{0, 1, 2, 3};
  const int n = 8000;
  std::vector<int> hist(pool.size(), 0);
  for (int s = 0; s < n; ++s) {
    SplitRng rng(mix_seed(17, kRoleSeedSample, static_cast<std::uint64_t>(s)));
    ++hist[sample_without_replacement(pool, 1, rng)[0]];
  }
  const double expected = static_cast<double>(n) / pool.size();
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / pool.size()));
  for (std::size_t v = 0; v < pool.size(); ++v) {
    CHECK(std::abs(hist[v] - expected) < 4.0 * sigma);
  }
}

TEST_SUITE_END();
