#include "graphssl/social.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "graphssl/parallel.hpp"
#include "graphssl/rng.hpp"

namespace graphssl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double hashed_length(std::uint64_t stream, std::int64_t arc_index,
                            double source_degree, double delta) {
  const double u = to_unit_open_closed(
      splitmix64_at(stream, static_cast<std::uint64_t>(arc_index)));
  return -source_degree * std::log(u) + delta;
}

struct QueueItem {
  double dist;
  NodeId origin;
  NodeId node;
};

struct QueueOrder {
  // std::priority_queue is a max-heap; invert to pop the smallest
  // (distance, origin) first.
  bool operator()(const QueueItem& a, const QueueItem& b) const {
    if (a.dist != b.dist) return a.dist > b.dist;
    return a.origin > b.origin;
  }
};

// Multi-source Dijkstra with lexicographic key (distance, origin seed id).
// ArcLength is called as arc_length(u, global_arc_index, neighbor) and may
// draw lazily; min_arc_length is a lower bound on every arc length, used to
// prune relaxations before drawing.
template <class ArcLength>
void run_dijkstra(const CsrGraph& g, const SeedAssignment& seeds,
                  ArcLength&& arc_length, double min_arc_length,
                  std::vector<double>& dist, std::vector<NodeId>& origin) {
  const NodeId n = g.num_nodes();
  dist.assign(static_cast<std::size_t>(n), kInf);
  origin.assign(static_cast<std::size_t>(n), -1);
  std::priority_queue<QueueItem, std::vector<QueueItem>, QueueOrder> heap;
  for (NodeId s : seeds.ids) {
    dist[s] = 0.0;
    origin[s] = s;
    heap.push({0.0, s, s});
  }
  while (!heap.empty()) {
    const QueueItem top = heap.top();
    heap.pop();
    const NodeId u = top.node;
    if (top.dist != dist[u] || top.origin != origin[u]) continue;  // stale
    const auto nbrs = g.neighbors(u);
    const std::int64_t base = g.arc_begin(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId v = nbrs[k];
      // Prune before drawing: even the shortest possible arc cannot improve
      // (dist, origin) at v.
      const double floor_dist = top.dist + min_arc_length;
      if (floor_dist > dist[v] ||
          (floor_dist == dist[v] && top.origin >= origin[v])) {
        continue;
      }
      const double nd =
          top.dist + arc_length(u, base + static_cast<std::int64_t>(k), v);
      if (nd < dist[v] || (nd == dist[v] && top.origin < origin[v])) {
        dist[v] = nd;
        origin[v] = top.origin;
        heap.push({nd, top.origin, v});
      }
    }
  }
}

}  // namespace

std::vector<double> draw_edge_lengths(const CsrGraph& g, double delta,
                                      std::uint64_t stream_seed) {
  if (delta < 0.0) {
    throw std::invalid_argument("draw_edge_lengths: negative delta");
  }
  std::vector<double> lengths(static_cast<std::size_t>(g.num_arcs()));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const double du = g.degree(u);
    const std::int64_t base = g.arc_begin(u);
    const std::int64_t deg = static_cast<std::int64_t>(g.neighbors(u).size());
    for (std::int64_t k = 0; k < deg; ++k) {
      lengths[base + k] = hashed_length(stream_seed, base + k, du, delta);
    }
  }
  return lengths;
}

std::vector<NodeId> nearest_seed_iteration(const CsrGraph& g,
                                           const SeedAssignment& seeds,
                                           std::span<const double> lengths) {
  if (lengths.size() != static_cast<std::size_t>(g.num_arcs())) {
    throw std::invalid_argument(
        "nearest_seed_iteration: length vector size mismatch");
  }
  double min_len = 0.0;
  if (!lengths.empty()) {
    min_len = *std::min_element(lengths.begin(), lengths.end());
    if (min_len < 0.0) {
      throw std::invalid_argument(
          "nearest_seed_iteration: negative arc length");
    }
  }
  std::vector<double> dist;
  std::vector<NodeId> origin;
  run_dijkstra(
      g, seeds,
      [&](NodeId, std::int64_t arc, NodeId) { return lengths[arc]; }, min_len,
      dist, origin);
  return origin;
}

std::pair<SoftLabelMatrix, NearestSeedCounts> nearest_seed(
    const CsrGraph& g, const SeedAssignment& seeds, const SocialParams& params,
    unsigned threads) {
  if (seeds.ids.empty()) {
    throw std::invalid_argument("nearest_seed: seed set is empty");
  }
  if (params.iterations < 1) {
    throw std::invalid_argument("nearest_seed: need at least one iteration");
  }
  if (params.delta < 0.0) {
    throw std::invalid_argument("nearest_seed: negative delta");
  }
  const NodeId n = g.num_nodes();
  const std::int32_t l = seeds.num_classes;

  // Label of each seed node, for counting.
  std::vector<std::int32_t> seed_label(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < seeds.ids.size(); ++k) {
    seed_label[seeds.ids[k]] = seeds.labels[k];
  }

  const int total_iters = params.iterations;
  unsigned workers = threads == 0 ? hardware_threads() : threads;
  if (workers > static_cast<unsigned>(total_iters)) {
    workers = static_cast<unsigned>(total_iters);
  }

  // Per-worker count accumulators, merged by addition after the join; the
  // merge is commutative over integers, so scheduling cannot change totals.
  std::vector<std::vector<std::int64_t>> partial(
      workers,
      std::vector<std::int64_t>(static_cast<std::size_t>(n) * l, 0));
  const int chunk = (total_iters + static_cast<int>(workers) - 1) /
                    static_cast<int>(workers);

  parallel_for(static_cast<std::int64_t>(workers), workers, [&](std::int64_t w) {
    const int begin = static_cast<int>(w) * chunk;
    const int end = std::min(begin + chunk, total_iters);
    std::vector<double> dist;
    std::vector<NodeId> origin;
    std::vector<std::int64_t>& acc = partial[w];
    for (int t = begin; t < end; ++t) {
      const std::uint64_t stream =
          mix_seed(params.rng_seed, kRoleNearestSeedIter,
                   static_cast<std::uint64_t>(t));
      run_dijkstra(
          g, seeds,
          [&](NodeId u, std::int64_t arc, NodeId) {
            return hashed_length(stream, arc, g.degree(u), params.delta);
          },
          params.delta, dist, origin);
      for (NodeId i = 0; i < n; ++i) {
        if (origin[i] >= 0) {
          ++acc[static_cast<std::size_t>(i) * l + seed_label[origin[i]]];
        }
      }
    }
  });

  NearestSeedCounts counts;
  counts.n = n;
  counts.num_classes = l;
  counts.counts.assign(static_cast<std::size_t>(n) * l, 0);
  for (const auto& acc : partial) {
    for (std::size_t k = 0; k < acc.size(); ++k) counts.counts[k] += acc[k];
  }
  counts.reached.assign(static_cast<std::size_t>(n), 0);
  SoftLabelMatrix soft(n, l, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    std::int64_t row_total = 0;
    for (std::int32_t j = 0; j < l; ++j) row_total += counts.at(i, j);
    counts.reached[i] = static_cast<std::int32_t>(row_total);
    const double denom = row_total > 0 ? static_cast<double>(row_total) : 1.0;
    for (std::int32_t j = 0; j < l; ++j) {
      soft(i, j) = static_cast<double>(counts.at(i, j)) / denom;
    }
  }
  return {std::move(soft), std::move(counts)};
}

std::vector<Prediction> nearest_seed_predictions(const SoftLabelMatrix& soft,
                                                 const NearestSeedCounts& counts,
                                                 const SeedAssignment& seeds) {
  const NodeId n = counts.n;
  // Fallback class for unreachable nodes: most frequent class among seeds,
  // lowest class id on ties.
  const std::vector<std::int64_t> hist = seeds.class_counts();
  std::int32_t fallback = 0;
  for (std::int32_t c = 1; c < counts.num_classes; ++c) {
    if (hist[c] > hist[fallback]) fallback = c;
  }
  const std::vector<char> is_seed = seeds.mask(n);
  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(n) - seeds.size());
  for (NodeId i = 0; i < n; ++i) {
    if (is_seed[i]) continue;
    if (counts.reached[i] == 0) {
      out.push_back({i, fallback, 0.0});
    } else {
      out.push_back(predict_row(soft.row(i), i));
    }
  }
  return out;
}

}  // namespace graphssl
