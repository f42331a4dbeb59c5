#pragma once

// Experiment orchestration: split management (seed / validation / test),
// precision metrics, the A/B half-split hyperparameter protocol, a unified
// front end over all six learners, the hyperparameter sweep runner, the
// fixed-iteration-budget runner, and result serialization (CSV + JSON).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphssl/bootstrap.hpp"
#include "graphssl/csr_graph.hpp"
#include "graphssl/features.hpp"
#include "graphssl/labels.hpp"
#include "graphssl/synth.hpp"

namespace graphssl {

// --- splits ----------------------------------------------------------------

// Pairwise-disjoint labeled node sets.  Any node in none of the three roles
// is simply unused by evaluation (it still participates in diffusion).
struct Split {
  SeedAssignment seed;
  SeedAssignment validation;
  SeedAssignment test;

  // Checks id ranges, matching class counts across roles, and pairwise
  // disjointness; throws std::invalid_argument on any violation.
  void validate(NodeId n) const;
};

enum class SeedMode { kBalanced, kProportional };

struct SplitParams {
  SeedMode mode = SeedMode::kBalanced;
  std::int64_t per_class = 1;   // balanced mode: seeds per class
  double rate = 0.1;            // proportional mode: seeds per class member
  NodeId validation_size = 500;
  std::uint64_t rng_seed = 0;
};

// Samples the seed set (balanced or proportional over the ground truth),
// then a uniform validation set of the requested size from the remaining
// nodes; every node left over becomes test.
Split make_random_split(std::span<const std::int32_t> labels,
                        std::int32_t num_classes, const SplitParams& params);

// Split files: "<stem>.seed" / "<stem>.val" / "<stem>.test" under dir, one
// decimal node id per line ('#' lines are comments).  Labels are not stored
// in split files; readers attach them from the ground-truth label vector.
void write_split(const std::string& dir, const std::string& stem,
                 const Split& split);
Split read_split(const std::string& dir, const std::string& stem,
                 std::span<const std::int32_t> labels,
                 std::int32_t num_classes);

// Prediction files: "node<TAB>label" per line, any subset of nodes.
void write_predictions(const std::string& path,
                       std::span<const Prediction> predictions);
std::vector<Prediction> read_predictions(const std::string& path);

// --- metrics -----------------------------------------------------------------

// Fraction of truth nodes whose predicted label equals the true label.
// Throws if the truth set is empty or any truth node lacks a prediction.
double precision(std::span<const Prediction> predictions,
                 std::span<const NodeId> truth_ids,
                 std::span<const std::int32_t> truth_labels);

// Same metric against a full labeling (e.g. a bootstrap step snapshot).
double snapshot_precision(std::span<const std::int32_t> snapshot,
                          std::span<const NodeId> truth_ids,
                          std::span<const std::int32_t> truth_labels);

// --- A/B protocol -------------------------------------------------------------

// Evaluates a hyperparameter grid without a separate validation set: the
// test set is shuffled and cut into halves A and B; each configuration is
// run once; each half is then scored under the configuration that is most
// accurate on the *other* half (ties -> lower configuration index).
// Returns the precision over all test nodes under that pairing.  Throws if
// the test set has fewer than two nodes ("degenerate split") or a
// configuration misses a test node.
//
// The half split is part of the contract: test positions are permuted by a
// Fisher-Yates shuffle driven by SplitRng(mix_seed(rng_seed, kRoleAbSplit))
// exactly as sample_without_replacement draws, and A is the first
// floor(m/2) shuffled positions (B absorbs the odd node).
double ab_protocol(
    std::span<const NodeId> test_ids,
    std::span<const std::int32_t> test_labels, std::size_t num_configs,
    const std::function<std::vector<Prediction>(std::size_t)>& run,
    std::uint64_t rng_seed);

// --- unified learner front end --------------------------------------------------

enum class Method { kLp, kNlp, kNs, kFeatRaw, kFeatFp, kFeatNfp };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);  // throws on unknown name
bool method_uses_features(Method m);
bool method_uses_iterations(Method m);  // all but feat-raw
bool method_uses_alpha(Method m);       // nlp, feat-nfp
bool method_uses_delta(Method m);       // ns

struct LearnerParams {
  Method method = Method::kLp;
  int iterations = 10;         // T (ignored by feat-raw)
  double alpha = 0.1;          // nlp / feat-nfp
  double delta = 0.0;          // ns
  LogRegHyper logreg;          // feat-*
  std::uint64_t rng_seed = 0;  // ns arc-length draws
  unsigned threads = 1;
};

// One base-learner run on the given seed set: one Prediction per non-seed
// node, ascending.  `features` may be null for methods that do not use
// them.  step_salt feeds the randomized learners' stream derivation exactly
// as a bootstrap step would, so a plain run (salt 0) is bit-identical to
// the first step of a bootstrap run.
std::vector<Prediction> run_base_learner(const CsrGraph& g,
                                         const SparseFeatureMatrix* features,
                                         const SeedAssignment& seeds,
                                         const LearnerParams& params,
                                         std::uint64_t step_salt = 0);

// Wraps run_base_learner as a bootstrap callback bound to `g`.  For feature
// methods the diffused matrix is computed once here and shared across all
// steps (feature diffusion never looks at labels).
BaseLearner make_base_learner(const CsrGraph& g,
                              const SparseFeatureMatrix* features,
                              const LearnerParams& params);

// --- sweep runner ----------------------------------------------------------------

struct SweepSpec {
  Method method = Method::kLp;
  std::vector<int> iterations_grid;  // T values; empty only for feat-raw
  std::vector<double> alpha_grid;    // nlp / feat-nfp only
  std::vector<double> delta_grid;    // ns only
  std::vector<double> r_grid;        // bootstrap promotion fractions
  bool bootstrap = false;
  int max_steps = 0;  // bootstrap step cap; 0 = run until S == V
  int repetitions = 1;
  std::uint64_t rng_seed = 0;
  LogRegHyper logreg;

  // Grids must be nonempty exactly where the method/bootstrap flags use
  // them and empty elsewhere; throws std::invalid_argument otherwise.
  void validate() const;
};

// One grid point; unused axes hold 0.
struct SweepCell {
  int iterations = 0;
  double alpha = 0.0;
  double delta = 0.0;
  double r = 0.0;
};

// Cross product in pinned row-major order: iterations, then alpha, then
// delta, then r (innermost).  Cell index = position in this list.
std::vector<SweepCell> enumerate_cells(const SweepSpec& spec);

struct RunResult {
  Method method = Method::kLp;
  int iterations = 0;
  double alpha = 0.0;
  double delta = 0.0;
  double r = 0.0;
  bool bootstrap = false;
  int repetition = 0;
  std::uint64_t seed = 0;  // the cell's derived stream seed
  int step = 0;            // chosen bootstrap step (0 for base runs)
  double val_acc = 0.0;
  double test_acc = 0.0;
  double wall_ms = 0.0;
  std::string error;  // nonempty if this cell failed; accuracies are NaN
};

// One repetition's data: the graph, optional features (rows() == 0 when the
// method uses none), and the split.
struct SweepData {
  CsrGraph graph;
  SparseFeatureMatrix features;
  Split split;
};

// Supplies the data for each repetition.  Random-split experiments return a
// freshly generated graph + split per repetition; fixed-dataset experiments
// return the same data every time.
using SweepDataProvider = std::function<SweepData(int repetition)>;

// Random-splits protocol over synthetic data: repetition `rep` generates a
// fresh planted partition and a fresh random split of it, both from streams
// derived deterministically from (rng_seed, rep).  The rng_seed fields
// inside `graph` and `split` are ignored.
struct SyntheticProtocol {
  PlantedPartitionParams graph;
  SplitParams split;
  std::uint64_t rng_seed = 0;
};
SweepDataProvider synthetic_provider(const SyntheticProtocol& protocol);

struct SweepOutcome {
  // One row per (repetition, cell), repetition-major, cells in
  // enumerate_cells order.  Identical for every thread count.
  std::vector<RunResult> rows;
  // Per repetition: index into `rows` of the validation-best cell
  // (ties -> lower cell index; failed cells never selected).
  std::vector<std::size_t> selected;
  // Mean / sample stddev over repetitions of the selected cells' test
  // accuracy — the headline number — and the matching mean validation
  // accuracy.
  double mean_selected_test_acc = 0.0;
  double stddev_selected_test_acc = 0.0;
  double mean_selected_val_acc = 0.0;
};

// Runs every grid point for every repetition; cells run in parallel, each
// single-threaded inside.  Per-cell errors are recorded on the row, not
// thrown; a repetition where every cell fails throws.
SweepOutcome run_sweep(const SweepSpec& spec, const SweepDataProvider& data,
                       unsigned threads = 1);
// Fixed-dataset convenience: the same data and split for every repetition.
SweepOutcome run_sweep(const SweepSpec& spec, const SweepData& data,
                       unsigned threads = 1);

// CSV with the exact header
//   method,iters,alpha,delta,r,bootstrap,repetition,seed,step,val_acc,test_acc,wall_ms
// one row per RunResult.  Everything except wall_ms is deterministic for a
// given spec seed.
void write_results_csv(const std::string& path,
                       std::span<const RunResult> rows);
std::string results_csv_string(std::span<const RunResult> rows);

// JSON summary: spec echo, per-cell mean/stddev across repetitions, per-rep
// selection, headline selected-cell aggregate, and any per-row errors.
void write_sweep_summary_json(const std::string& path, const SweepSpec& spec,
                              const SweepOutcome& outcome);

// --- fixed iteration budget -----------------------------------------------------

struct BudgetedOutcome {
  RunResult result;
  BootstrapTrace trace;  // full trace, for exact boundary comparisons
};

// Bootstrap under a total iteration budget: the base learner runs
// iterations_per_step (k) rounds per step and at most floor(B / k) steps
// execute.  k == B collapses to the plain base learner (max_steps == 1).
// Throws if k <= 0 or k > B.  `r` is the promotion fraction.
BudgetedOutcome budgeted_run(const SweepData& data, LearnerParams params,
                             double r, int budget, int iterations_per_step);

}  // namespace graphssl
