#include "graphssl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "graphssl/rng.hpp"

using namespace graphssl;

namespace {

PlantedPartitionParams params(NodeId n, std::int32_t classes, double p,
                              double q, std::uint64_t seed) {
  PlantedPartitionParams pp;
  pp.n = n;
  pp.classes = classes;
  pp.p = p;
  pp.q = q;
  pp.rng_seed = seed;
  return pp;
}

// Counts edges (u < v) within and across label blocks.
std::pair<std::int64_t, std::int64_t> intra_inter_edges(
    const PlantedPartition& data) {
  std::int64_t intra = 0;
  std::int64_t inter = 0;
  for (NodeId u = 0; u < data.graph.num_nodes(); ++u) {
    for (NodeId v : data.graph.neighbors(u)) {
      if (u >= v) continue;
      (data.labels[u] == data.labels[v] ? intra : inter) += 1;
    }
  }
  return {intra, inter};
}

}  // namespace

TEST_SUITE_BEGIN("synth");

TEST_CASE("extreme probabilities produce disjoint complete blocks") {
  const PlantedPartition data =
      generate_planted_partition(params(12, 3, 1.0, 0.0, 1));
  // Three complete 4-cliques and nothing else.
  CHECK(data.graph.num_edges() == 3 * 6);
  for (NodeId u = 0; u < 12; ++u) {
    CHECK(data.graph.neighbors(u).size() == 3);
    for (NodeId v : data.graph.neighbors(u)) {
      CHECK(data.labels[u] == data.labels[v]);
    }
  }
}

TEST_CASE("a single complete class is a complete graph") {
  const PlantedPartition data =
      generate_planted_partition(params(30, 1, 1.0, 0.0, 2));
  CHECK(data.graph.num_edges() == 30 * 29 / 2);
  CHECK(std::all_of(data.labels.begin(), data.labels.end(),
                    [](std::int32_t c) { return c == 0; }));
}

TEST_CASE("uneven node counts give the first classes the extra node") {
  const PlantedPartition data =
      generate_planted_partition(params(13, 3, 0.5, 0.1, 3));
  std::vector<std::int64_t> counts(3, 0);
  for (std::int32_t c : data.labels) counts[c] += 1;
  CHECK(counts == std::vector<std::int64_t>{5, 4, 4});
  // Blocks are consecutive: labels are non-decreasing.
  CHECK(std::is_sorted(data.labels.begin(), data.labels.end()));
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(generate_planted_partition(params(-1, 2, 0.5, 0.1, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_planted_partition(params(10, 0, 0.5, 0.1, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_planted_partition(params(10, 2, 1.5, 0.1, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_planted_partition(params(10, 2, 0.5, -0.1, 0)),
                  std::invalid_argument);
  // q must stay strictly below p unless the test-only escape hatch is set.
  CHECK_THROWS_AS(generate_planted_partition(params(10, 2, 0.1, 0.5, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_planted_partition(params(10, 2, 0.1, 0.1, 0)),
                  std::invalid_argument);
  PlantedPartitionParams equal = params(10, 2, 0.1, 0.1, 0);
  equal.allow_equal_probabilities = true;
  CHECK_NOTHROW(generate_planted_partition(equal));
}

TEST_CASE("generation is deterministic in the seed") {
  const PlantedPartitionParams pp = params(200, 4, 0.1, 0.02, 77);
  const PlantedPartition a = generate_planted_partition(pp);
  const PlantedPartition b = generate_planted_partition(pp);
  CHECK(a.graph == b.graph);
  CHECK(a.labels == b.labels);

  PlantedPartitionParams other = pp;
  other.rng_seed = 78;
  CHECK(generate_planted_partition(other).graph != a.graph);
}

TEST_CASE("edge counts match the block probabilities") {
  // 3 blocks of 200: 59700 intra pairs at p, 120000 inter pairs at q.
  const PlantedPartition data =
      generate_planted_partition(params(600, 3, 0.05, 0.01, 11));
  const auto [intra, inter] = intra_inter_edges(data);

  const double intra_mean = 59700 * 0.05;
  const double intra_sd = std::sqrt(59700 * 0.05 * 0.95);
  CHECK(std::abs(intra - intra_mean) <= 4.0 * intra_sd);

  const double inter_mean = 120000 * 0.01;
  const double inter_sd = std::sqrt(120000 * 0.01 * 0.99);
  CHECK(std::abs(inter - inter_mean) <= 4.0 * inter_sd);
}

TEST_CASE("balanced seed sampling") {
  const PlantedPartition data =
      generate_planted_partition(params(90, 3, 0.2, 0.05, 5));

  SUBCASE("exact per-class counts with matching labels") {
    SplitRng rng(8);
    const SeedAssignment seeds = sample_balanced_seeds(data.labels, 3, 4, rng);
    REQUIRE(seeds.size() == 12);
    CHECK(seeds.class_counts() == std::vector<std::int64_t>{4, 4, 4});
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      CHECK(seeds.labels[k] == data.labels[seeds.ids[k]]);
    }
  }
  SUBCASE("deterministic given the generator state") {
    SplitRng r1(9);
    SplitRng r2(9);
    const SeedAssignment a = sample_balanced_seeds(data.labels, 3, 4, r1);
    const SeedAssignment b = sample_balanced_seeds(data.labels, 3, 4, r2);
    CHECK(a.ids == b.ids);
    CHECK(a.labels == b.labels);
  }
  SUBCASE("a class smaller than the request is rejected") {
    SplitRng rng(10);
    CHECK_THROWS_AS(sample_balanced_seeds(data.labels, 3, 31, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_balanced_seeds(data.labels, 3, -1, rng),
                    std::invalid_argument);
  }
  SUBCASE("single draws are roughly uniform over the class") {
    // Class 0 has 30 members; 3000 single-seed draws should hit each with
    // frequency 1/30 give or take four standard deviations.
    std::vector<std::int64_t> hits(90, 0);
    for (int trial = 0; trial < 3000; ++trial) {
      SplitRng rng(mix_seed(123, static_cast<std::uint64_t>(trial)));
      const SeedAssignment seeds =
          sample_balanced_seeds(data.labels, 3, 1, rng);
      hits[seeds.ids[0]] += 1;  // ids sorted; index 0 is the class-0 pick
    }
    const double mean = 3000.0 / 30.0;
    const double sd = std::sqrt(3000.0 * (1.0 / 30.0) * (29.0 / 30.0));
    for (NodeId v = 0; v < 30; ++v) {
      CHECK(std::abs(hits[v] - mean) <= 4.0 * sd);
    }
  }
}

TEST_CASE("proportional seed sampling") {
  // Hand-built labels: 25 of class 0, then 50 of class 1.
  std::vector<std::int32_t> labels(75, 1);
  std::fill(labels.begin(), labels.begin() + 25, 0);

  SUBCASE("quotas are round(rate * class size) with a floor of one") {
    SplitRng rng(4);
    // 0.1 * 25 = 2.5 rounds away from zero to 3; 0.1 * 50 = 5.
    const SeedAssignment seeds =
        sample_proportional_seeds(labels, 2, 0.1, rng);
    CHECK(seeds.class_counts() == std::vector<std::int64_t>{3, 5});
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      CHECK(seeds.labels[k] == labels[seeds.ids[k]]);
    }
  }
  SUBCASE("tiny rates still seed every nonempty class") {
    SplitRng rng(5);
    const SeedAssignment seeds =
        sample_proportional_seeds(labels, 2, 0.001, rng);
    CHECK(seeds.class_counts() == std::vector<std::int64_t>{1, 1});
  }
  SUBCASE("empty classes are skipped") {
    const std::vector<std::int32_t> one_class(40, 0);
    SplitRng rng(6);
    const SeedAssignment seeds =
        sample_proportional_seeds(one_class, 2, 0.1, rng);
    CHECK(seeds.class_counts() == std::vector<std::int64_t>{4, 0});
  }
  SUBCASE("rate and input validation") {
    SplitRng rng(7);
    CHECK_THROWS_AS(sample_proportional_seeds(labels, 2, 0.0, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_proportional_seeds(labels, 2, 1.5, rng),
                    std::invalid_argument);
    const std::vector<std::int32_t> empty;
    CHECK_THROWS_AS(sample_proportional_seeds(empty, 2, 0.1, rng),
                    std::invalid_argument);
  }
}

TEST_SUITE_END();
