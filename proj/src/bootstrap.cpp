#include "graphssl/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphssl {
namespace {

std::vector<double> resolve_class_freqs(const SeedAssignment& seeds,
                                        const BootstrapConfig& cfg) {
  if (!cfg.class_freqs.empty()) {
    if (cfg.class_freqs.size() !=
        static_cast<std::size_t>(seeds.num_classes)) {
      throw std::invalid_argument("run_bootstrap: class_freqs size != L");
    }
    double total = 0.0;
    for (double f : cfg.class_freqs) {
      if (f < 0.0) {
        throw std::invalid_argument("run_bootstrap: negative class frequency");
      }
      total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument(
          "run_bootstrap: class frequencies must sum to 1");
    }
    return cfg.class_freqs;
  }
  // Default: estimate from the initial seed proportions — the only label
  // information legitimately available before learning.
  const std::vector<std::int64_t> counts = seeds.class_counts();
  std::vector<double> freqs(counts.size(), 0.0);
  const double total = static_cast<double>(seeds.size());
  if (total == 0.0) {
    throw std::invalid_argument("run_bootstrap: empty seed set");
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    freqs[c] = static_cast<double>(counts[c]) / total;
  }
  return freqs;
}

double snapshot_accuracy(const std::vector<std::int32_t>& snapshot,
                         std::span<const NodeId> ids,
                         std::span<const std::int32_t> labels) {
  if (ids.empty()) return 0.0;
  std::int64_t correct = 0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (snapshot[ids[k]] == labels[k]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ids.size());
}

}  // namespace

SeedAssignment promote_seeds(std::span<const Prediction> predictions,
                             const SeedAssignment& current, double r,
                             std::span<const double> class_freqs, NodeId n) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw std::invalid_argument("promote_seeds: r must lie in (0,1]");
  }
  const std::int32_t l = current.num_classes;
  if (class_freqs.size() != static_cast<std::size_t>(l)) {
    throw std::invalid_argument("promote_seeds: class_freqs size != L");
  }

  // Bucket candidates per predicted class.
  std::vector<std::vector<Prediction>> buckets(static_cast<std::size_t>(l));
  for (const Prediction& p : predictions) {
    if (p.label < 0 || p.label >= l) {
      throw std::invalid_argument("promote_seeds: predicted label out of range");
    }
    buckets[p.label].push_back(p);
  }

  std::vector<NodeId> new_ids(current.ids.begin(), current.ids.end());
  std::vector<std::int32_t> new_labels(current.labels.begin(),
                                       current.labels.end());
  for (std::int32_t c = 0; c < l; ++c) {
    auto& bucket = buckets[c];
    if (bucket.empty()) continue;
    const std::int64_t quota = std::max<std::int64_t>(
        1, std::llround(r * static_cast<double>(n) * class_freqs[c]));
    const std::size_t take =
        std::min<std::size_t>(bucket.size(), static_cast<std::size_t>(quota));
    std::partial_sort(bucket.begin(), bucket.begin() + take, bucket.end(),
                      [](const Prediction& a, const Prediction& b) {
                        if (a.margin != b.margin) return a.margin > b.margin;
                        return a.node < b.node;  // margin ties: lower id wins
                      });
    for (std::size_t k = 0; k < take; ++k) {
      new_ids.push_back(bucket[k].node);
      new_labels.push_back(c);
    }
  }
  return SeedAssignment::make(std::move(new_ids), std::move(new_labels), l);
}

BootstrapTrace run_bootstrap(const CsrGraph& g, const SeedAssignment& seeds,
                             const BaseLearner& learner,
                             const BootstrapConfig& cfg) {
  const NodeId n = g.num_nodes();
  if (cfg.validation_ids.size() != cfg.validation_labels.size()) {
    throw std::invalid_argument(
        "run_bootstrap: validation ids/labels size mismatch");
  }
  if (cfg.validation_ids.empty() && cfg.max_steps != 1) {
    throw std::invalid_argument(
        "run_bootstrap: empty validation set — step selection is impossible "
        "unless max_steps == 1");
  }
  const std::vector<double> freqs = resolve_class_freqs(seeds, cfg);

  // Nodes barred from promotion under the configured pool.
  std::vector<char> protected_node(static_cast<std::size_t>(n), 0);
  if (cfg.pool != PromotionPool::kAllNonSeeds) {
    for (NodeId v : cfg.validation_ids) protected_node[v] = 1;
    if (cfg.pool == PromotionPool::kExcludeValidationAndTest) {
      for (NodeId v : cfg.test_ids) protected_node[v] = 1;
    }
  }

  BootstrapTrace trace;
  SeedAssignment current = seeds;

  // Rolling snapshot: seed entries (original and promoted) stay frozen;
  // entries of still-unlabeled nodes are overwritten each step.
  std::vector<std::int32_t> snapshot(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < current.ids.size(); ++k) {
    snapshot[current.ids[k]] = current.labels[k];
  }

  double best_val = -1.0;
  int steps_since_best = 0;
  for (std::uint64_t step = 0;; ++step) {
    std::vector<Prediction> preds = learner(g, current, step);
    if (preds.size() != static_cast<std::size_t>(n) - current.size()) {
      throw std::runtime_error(
          "run_bootstrap: learner returned " + std::to_string(preds.size()) +
          " predictions for " + std::to_string(n - current.size()) +
          " unlabeled nodes");
    }
    for (const Prediction& p : preds) snapshot[p.node] = p.label;

    BootstrapStep entry;
    entry.snapshot = snapshot;
    entry.predictions = preds;
    entry.val_accuracy = snapshot_accuracy(snapshot, cfg.validation_ids,
                                           cfg.validation_labels);
    entry.seed_count = static_cast<std::int64_t>(current.size());
    trace.steps.push_back(std::move(entry));

    if (trace.steps.back().val_accuracy > best_val) {
      best_val = trace.steps.back().val_accuracy;
      steps_since_best = 0;
    } else {
      ++steps_since_best;
    }

    if (current.size() == static_cast<std::size_t>(n)) break;
    if (cfg.max_steps > 0 &&
        trace.steps.size() >= static_cast<std::size_t>(cfg.max_steps)) {
      break;
    }
    if (cfg.patience > 0 && steps_since_best >= cfg.patience) break;

    std::vector<Prediction> eligible;
    eligible.reserve(preds.size());
    for (const Prediction& p : preds) {
      if (!protected_node[p.node]) eligible.push_back(p);
    }
    SeedAssignment next = promote_seeds(eligible, current, cfg.r, freqs, n);
    if (next.size() == current.size()) break;  // nothing left to promote
    // Promoted nodes enter S under the labels just written to the snapshot;
    // future steps never overwrite seed entries, so those labels stay frozen.
    current = std::move(next);
  }

  trace.chosen_step = 0;
  for (std::size_t t = 1; t < trace.steps.size(); ++t) {
    if (trace.steps[t].val_accuracy >
        trace.steps[trace.chosen_step].val_accuracy) {
      trace.chosen_step = static_cast<int>(t);
    }
  }
  return trace;
}

}  // namespace graphssl
