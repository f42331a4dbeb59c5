#pragma once

// Nearest-seed distance diffusion: Monte-Carlo iterations that draw random
// arc lengths, run a multi-source shortest-path search from the seed set,
// and count which seed label lands nearest to each node.
//
// Arc lengths are Exponential with mean |Gamma(u)| (rate = inverse source
// degree) plus a fixed offset delta, drawn independently per directed arc.
// Draws are counter-based: the length of global arc k in iteration t is a
// pure hash of (iteration stream seed, k), so lengths can be drawn lazily
// inside the search, in any relaxation order, and still match a materialized
// length vector bit for bit.

#include <cstdint>
#include <utility>
#include <vector>

#include "graphssl/csr_graph.hpp"
#include "graphssl/dense_matrix.hpp"
#include "graphssl/labels.hpp"

namespace graphssl {

struct SocialParams {
  int iterations = 1;        // T >= 1
  double delta = 0.0;        // offset added to every drawn length, >= 0
  std::uint64_t rng_seed = 0;
};

struct NearestSeedCounts {
  NodeId n = 0;
  std::int32_t num_classes = 0;
  std::vector<std::int64_t> counts;   // n x L, row-major; c[i][j]
  std::vector<std::int32_t> reached;  // per node: iterations with any seed reachable

  std::int64_t at(NodeId i, std::int32_t j) const {
    return counts[static_cast<std::size_t>(i) * num_classes + j];
  }
};

// Materializes the per-arc lengths one iteration would use; global arc index
// k of node u is g.arc_begin(u) + offset-within-row.  Lengths are
// -|Gamma(u)| * ln(U) + delta with U in (0,1], U = hash(stream_seed, k).
std::vector<double> draw_edge_lengths(const CsrGraph& g, double delta,
                                      std::uint64_t stream_seed);

// One multi-source Dijkstra from all seeds at distance 0 under the given
// arc lengths.  Returns the nearest seed's node id per node, or -1 where no
// seed is reachable.  Distance ties between seeds resolve to the lower seed
// node id (the search key is lexicographic (distance, seed id)).
std::vector<NodeId> nearest_seed_iteration(const CsrGraph& g,
                                           const SeedAssignment& seeds,
                                           std::span<const double> lengths);

// Full Monte-Carlo run: T iterations, each with its own counter-based
// stream derived from (rng_seed, iteration index).  Soft label row i is
// counts[i] / max(reached[i], 1).  Iterations may run on multiple threads;
// counts are merged by integer addition, so results are independent of
// scheduling.
std::pair<SoftLabelMatrix, NearestSeedCounts> nearest_seed(
    const CsrGraph& g, const SeedAssignment& seeds, const SocialParams& params,
    unsigned threads = 1);

// Prediction extraction for nearest-seed runs: argmax of raw counts (lowest
// class index on ties), margin = top-two gap of the normalized row.  Nodes
// never reached by any seed default to the globally most frequent seed
// class (lowest class id on ties) with margin 0.
std::vector<Prediction> nearest_seed_predictions(const SoftLabelMatrix& soft,
                                                 const NearestSeedCounts& counts,
                                                 const SeedAssignment& seeds);

}  // namespace graphssl
