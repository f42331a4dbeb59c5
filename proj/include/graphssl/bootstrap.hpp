#pragma once

// Self-training wrapper: repeatedly run a base learner, promote its
// highest-margin predictions into the seed set under class-proportional
// quotas, and pick the best step by validation accuracy.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "graphssl/csr_graph.hpp"
#include "graphssl/labels.hpp"

namespace graphssl {

// A base learner maps (graph, current seeds) to one Prediction per non-seed
// node.  step_salt is the bootstrap step index; randomized learners fold it
// into their RNG stream so every step sees fresh draws, deterministic ones
// ignore it.
using BaseLearner = std::function<std::vector<Prediction>(
    const CsrGraph&, const SeedAssignment&, std::uint64_t step_salt)>;

// Which nodes may be promoted to pseudo-seeds.  kAllNonSeeds follows the
// textbook loop (it runs until S == V, so held-out nodes eventually join S
// under their *predicted* labels — evaluation keeps using the frozen
// snapshot labels, so accuracy bookkeeping stays honest).  The two stricter
// pools keep held-out nodes out of S entirely; the loop then stops once no
// eligible candidate remains.
enum class PromotionPool {
  kAllNonSeeds,
  kExcludeValidation,
  kExcludeValidationAndTest,
};

struct BootstrapConfig {
  double r = 0.1;  // per-step promotion budget as a fraction of n, in (0,1]
  // Class frequencies pi; empty = estimate from the initial seed labels.
  std::vector<double> class_freqs;
  // 0 = run until S == V (or no promotable candidate remains).
  int max_steps = 0;
  std::vector<NodeId> validation_ids;
  std::vector<std::int32_t> validation_labels;
  PromotionPool pool = PromotionPool::kAllNonSeeds;
  // Extra node set the pool excludes (test ids, for kExcludeValidationAndTest).
  std::vector<NodeId> test_ids;
  // If > 0, stop after this many consecutive steps without a validation
  // improvement.  Off by default.
  int patience = 0;
};

struct BootstrapStep {
  // Full labeling after this step: original seeds keep their input labels,
  // promoted nodes keep the label under which they were promoted (frozen),
  // current non-seeds carry this step's fresh predictions.
  std::vector<std::int32_t> snapshot;
  // The step's raw learner output (one entry per node unlabeled at step
  // entry), kept so single-step runs can be compared against a plain base
  // run exactly, margins included.
  std::vector<Prediction> predictions;
  double val_accuracy = 0.0;
  std::int64_t seed_count = 0;
};

struct BootstrapTrace {
  std::vector<BootstrapStep> steps;
  int chosen_step = 0;  // argmax validation accuracy, earliest on ties
};

// One promotion round: for each class i, the min(|C_i|, quota_i) highest
// margin nodes predicted as class i join the seed set with their predicted
// labels, quota_i = max(1, round(r * n * freq_i)).  Margin ties resolve to
// the lower node id.  `predictions` must cover exactly the promotion pool
// (callers filter out protected nodes beforehand).
SeedAssignment promote_seeds(std::span<const Prediction> predictions,
                             const SeedAssignment& current, double r,
                             std::span<const double> class_freqs, NodeId n);

// Runs learn -> snapshot -> promote until S == V, max_steps, or no
// promotable candidate remains.  Requires a nonempty validation set unless
// max_steps == 1 (with a single step there is nothing to select).
BootstrapTrace run_bootstrap(const CsrGraph& g, const SeedAssignment& seeds,
                             const BaseLearner& learner,
                             const BootstrapConfig& cfg);

}  // namespace graphssl
