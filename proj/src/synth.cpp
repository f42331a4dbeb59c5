#include "graphssl/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace graphssl {
namespace {

// Appends every index t in [0, count) selected by an independent
// Bernoulli(prob) to `hit`, via geometric jumps between successes.
template <class Emit>
void skip_sample(std::int64_t count, double prob, SplitRng& rng, Emit&& emit) {
  if (count <= 0 || prob <= 0.0) return;
  if (prob >= 1.0) {
    for (std::int64_t t = 0; t < count; ++t) emit(t);
    return;
  }
  const double log1m = std::log1p(-prob);
  std::int64_t t = -1;
  for (;;) {
    // Failures before the next success: floor(ln(U) / ln(1-p)), U in (0,1].
    const double u = rng.uniform();
    const double jump = std::floor(std::log(u) / log1m);
    if (jump >= static_cast<double>(count)) break;  // guards int overflow
    t += static_cast<std::int64_t>(jump) + 1;
    if (t >= count) break;
    emit(t);
  }
}

// Inverse of t = i*(i-1)/2 + j over pairs j < i.
inline void decode_triangular(std::int64_t t, NodeId& i, NodeId& j) {
  auto tri = [](std::int64_t k) { return k * (k - 1) / 2; };
  std::int64_t row = static_cast<std::int64_t>(
      (1.0 + std::sqrt(8.0 * static_cast<double>(t) + 1.0)) / 2.0);
  while (tri(row) > t) --row;
  while (tri(row + 1) <= t) ++row;
  i = static_cast<NodeId>(row);
  j = static_cast<NodeId>(t - tri(row));
}

std::vector<std::vector<NodeId>> class_members(
    std::span<const std::int32_t> labels, std::int32_t num_classes) {
  std::vector<std::vector<NodeId>> members(
      static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::int32_t c = labels[i];
    if (c < 0 || c >= num_classes) {
      throw std::invalid_argument("label " + std::to_string(c) +
                                  " out of range [0, " +
                                  std::to_string(num_classes) + ")");
    }
    members[c].push_back(static_cast<NodeId>(i));
  }
  return members;
}

}  // namespace

PlantedPartition generate_planted_partition(const PlantedPartitionParams& pp) {
  if (pp.n < 0) {
    throw std::invalid_argument("generate_planted_partition: negative n");
  }
  if (pp.classes < 1) {
    throw std::invalid_argument("generate_planted_partition: classes < 1");
  }
  if (!(pp.p >= 0.0 && pp.p <= 1.0) || !(pp.q >= 0.0 && pp.q <= 1.0)) {
    throw std::invalid_argument(
        "generate_planted_partition: probabilities must lie in [0,1]");
  }
  const bool ordered = pp.allow_equal_probabilities ? pp.q <= pp.p
                                                    : pp.q < pp.p;
  if (!ordered) {
    throw std::invalid_argument(
        "generate_planted_partition: expected q < p, got p = " +
        std::to_string(pp.p) + ", q = " + std::to_string(pp.q));
  }

  // Equal-size consecutive blocks; the first n mod L classes get the extra.
  const std::int32_t l = pp.classes;
  std::vector<NodeId> start(static_cast<std::size_t>(l) + 1, 0);
  for (std::int32_t c = 0; c < l; ++c) {
    const NodeId size = pp.n / l + (c < pp.n % l ? 1 : 0);
    start[c + 1] = start[c] + size;
  }

  PlantedPartition out;
  out.labels.assign(static_cast<std::size_t>(pp.n), 0);
  for (std::int32_t c = 0; c < l; ++c) {
    for (NodeId v = start[c]; v < start[c + 1]; ++v) out.labels[v] = c;
  }

  SplitRng rng(mix_seed(pp.rng_seed, kRoleGraphGen));
  std::vector<Edge> edges;
  // Expected edge count, for one allocation.
  {
    double expected = 0.0;
    for (std::int32_t a = 0; a < l; ++a) {
      const double sa = static_cast<double>(start[a + 1] - start[a]);
      expected += pp.p * sa * (sa - 1.0) / 2.0;
      for (std::int32_t b = a + 1; b < l; ++b) {
        expected += pp.q * sa * static_cast<double>(start[b + 1] - start[b]);
      }
    }
    edges.reserve(static_cast<std::size_t>(expected * 1.1) + 64);
  }

  for (std::int32_t a = 0; a < l; ++a) {
    const NodeId base_a = start[a];
    const std::int64_t size_a = start[a + 1] - start[a];
    // Intra-class pairs, triangular enumeration.
    skip_sample(size_a * (size_a - 1) / 2, pp.p, rng, [&](std::int64_t t) {
      NodeId i = 0, j = 0;
      decode_triangular(t, i, j);
      edges.push_back({static_cast<NodeId>(base_a + i),
                       static_cast<NodeId>(base_a + j)});
    });
    // Inter-class pairs against every later block, row-major enumeration.
    for (std::int32_t b = a + 1; b < l; ++b) {
      const NodeId base_b = start[b];
      const std::int64_t size_b = start[b + 1] - start[b];
      skip_sample(size_a * size_b, pp.q, rng, [&](std::int64_t t) {
        edges.push_back({static_cast<NodeId>(base_a + t / size_b),
                         static_cast<NodeId>(base_b + t % size_b)});
      });
    }
  }

  out.graph = CsrGraph::from_edges(edges, pp.n);
  return out;
}

SeedAssignment sample_balanced_seeds(std::span<const std::int32_t> labels,
                                     std::int32_t num_classes,
                                     std::int64_t per_class, SplitRng& rng) {
  if (per_class < 0) {
    throw std::invalid_argument("sample_balanced_seeds: negative per_class");
  }
  const auto members = class_members(labels, num_classes);
  std::vector<NodeId> ids;
  std::vector<std::int32_t> seed_labels;
  for (std::int32_t c = 0; c < num_classes; ++c) {
    if (static_cast<std::int64_t>(members[c].size()) < per_class) {
      throw std::invalid_argument(
          "sample_balanced_seeds: class " + std::to_string(c) + " has only " +
          std::to_string(members[c].size()) + " members, need " +
          std::to_string(per_class));
    }
    const std::vector<NodeId> picked = sample_without_replacement(
        members[c], static_cast<std::size_t>(per_class), rng);
    for (NodeId v : picked) {
      ids.push_back(v);
      seed_labels.push_back(c);
    }
  }
  return SeedAssignment::make(std::move(ids), std::move(seed_labels),
                              num_classes);
}

SeedAssignment sample_proportional_seeds(std::span<const std::int32_t> labels,
                                         std::int32_t num_classes, double rate,
                                         SplitRng& rng) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw std::invalid_argument(
        "sample_proportional_seeds: rate must lie in (0,1]");
  }
  if (labels.empty()) {
    throw std::invalid_argument("sample_proportional_seeds: empty label set");
  }
  const auto members = class_members(labels, num_classes);
  std::vector<NodeId> ids;
  std::vector<std::int32_t> seed_labels;
  for (std::int32_t c = 0; c < num_classes; ++c) {
    if (members[c].empty()) continue;
    const std::int64_t quota = std::max<std::int64_t>(
        1, std::llround(rate * static_cast<double>(members[c].size())));
    const std::size_t take = std::min<std::size_t>(
        members[c].size(), static_cast<std::size_t>(quota));
    const std::vector<NodeId> picked =
        sample_without_replacement(members[c], take, rng);
    for (NodeId v : picked) {
      ids.push_back(v);
      seed_labels.push_back(c);
    }
  }
  return SeedAssignment::make(std::move(ids), std::move(seed_labels),
                              num_classes);
}

}  // namespace graphssl
