#pragma once

// Planted-partition (stochastic block model) generator and seed samplers.

#include <cstdint>
#include <span>
#include <vector>

#include "graphssl/csr_graph.hpp"
#include "graphssl/labels.hpp"
#include "graphssl/rng.hpp"

namespace graphssl {

struct PlantedPartitionParams {
  NodeId n = 0;
  std::int32_t classes = 2;
  double p = 0.0;  // intra-class edge probability
  double q = 0.0;  // inter-class edge probability, q < p
  std::uint64_t rng_seed = 0;
  // Tests only: permits p == q (an Erdos-Renyi graph with decorative labels).
  bool allow_equal_probabilities = false;
};

struct PlantedPartition {
  CsrGraph graph;
  std::vector<std::int32_t> labels;  // ground truth class per node
};

// Every intra-class pair gets an edge independently with probability p,
// every inter-class pair with probability q.  Classes are equal-size blocks
// of consecutive node ids (the first n mod L classes get one extra node).
// Implemented by geometric skip sampling over each block's implicit pair
// list — expected O(edges) work, never O(n^2).
PlantedPartition generate_planted_partition(const PlantedPartitionParams& p);

// Exactly per_class seeds per class, uniform without replacement.
SeedAssignment sample_balanced_seeds(std::span<const std::int32_t> labels,
                                     std::int32_t num_classes,
                                     std::int64_t per_class, SplitRng& rng);

// Per class, round(rate * |class|) seeds with a floor of one per nonempty
// class, uniform without replacement.
SeedAssignment sample_proportional_seeds(std::span<const std::int32_t> labels,
                                         std::int32_t num_classes, double rate,
                                         SplitRng& rng);

}  // namespace graphssl
