#include "graphssl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "json.hpp"

#include "graphssl/parallel.hpp"
#include "graphssl/rng.hpp"
#include "graphssl/social.hpp"
#include "graphssl/spectral.hpp"
#include "graphssl/synth.hpp"

namespace graphssl {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// --- line-oriented integer file parsing -------------------------------------

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

bool skip_line(const std::string& line) {
  return line.empty() || line[0] == '#';
}

// Parses `count` tab-separated decimal integers from a line.
void parse_ints(const std::string& path, std::size_t line_no,
                const std::string& line, std::span<std::int64_t> out) {
  const char* cur = line.data();
  const char* end = line.data() + line.size();
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k > 0) {
      if (cur == end || *cur != '\t') {
        parse_fail(path, line_no, "expected tab-separated fields");
      }
      ++cur;
    }
    auto [next, ec] = std::from_chars(cur, end, out[k]);
    if (ec != std::errc()) parse_fail(path, line_no, "malformed integer");
    cur = next;
  }
  if (cur != end) parse_fail(path, line_no, "trailing characters");
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<NodeId> read_id_file(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<NodeId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(std::move(line));
    if (skip_line(line)) continue;
    std::int64_t v[1];
    parse_ints(path, line_no, line, v);
    if (v[0] < 0 || v[0] > std::numeric_limits<NodeId>::max()) {
      parse_fail(path, line_no, "node id out of range");
    }
    ids.push_back(static_cast<NodeId>(v[0]));
  }
  return ids;
}

void write_id_file(const std::string& path, std::span<const NodeId> ids) {
  std::ofstream out = open_for_write(path);
  for (NodeId id : ids) out << id << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

SeedAssignment attach_labels(std::vector<NodeId> ids,
                             std::span<const std::int32_t> labels,
                             std::int32_t num_classes,
                             const std::string& what) {
  std::vector<std::int32_t> role_labels;
  role_labels.reserve(ids.size());
  for (NodeId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= labels.size()) {
      throw std::invalid_argument(what + " node " + std::to_string(id) +
                                  " has no ground-truth label");
    }
    role_labels.push_back(labels[id]);
  }
  return SeedAssignment::make(std::move(ids), std::move(role_labels),
                              num_classes);
}

std::string role_path(const std::string& dir, const std::string& stem,
                      const char* ext) {
  return (std::filesystem::path(dir) / (stem + ext)).string();
}

// --- formatting ---------------------------------------------------------------

std::string fmt_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_acc(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

double mean_of(std::span<const double> xs) {
  if (xs.empty()) return kNan;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

// Sample standard deviation; 0 for fewer than two points.
double stddev_of(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

// --- splits --------------------------------------------------------------------

void Split::validate(NodeId n) const {
  seed.mask(n);
  validation.mask(n);
  test.mask(n);
  if (validation.num_classes != seed.num_classes ||
      test.num_classes != seed.num_classes) {
    throw std::invalid_argument("Split: class count differs across roles");
  }
  auto disjoint = [](const SeedAssignment& a, const SeedAssignment& b,
                     const char* an, const char* bn) {
    std::size_t i = 0, j = 0;
    while (i < a.ids.size() && j < b.ids.size()) {
      if (a.ids[i] == b.ids[j]) {
        throw std::invalid_argument("Split: node " + std::to_string(a.ids[i]) +
                                    " appears in both the " + an +
                                    " and " + bn + " sets");
      }
      if (a.ids[i] < b.ids[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  };
  disjoint(seed, validation, "seed", "validation");
  disjoint(seed, test, "seed", "test");
  disjoint(validation, test, "validation", "test");
}

Split make_random_split(std::span<const std::int32_t> labels,
                        std::int32_t num_classes, const SplitParams& params) {
  if (labels.empty()) {
    throw std::invalid_argument("make_random_split: empty label set");
  }
  const NodeId n = static_cast<NodeId>(labels.size());

  SplitRng seed_rng(mix_seed(params.rng_seed, kRoleSeedSample));
  Split split;
  split.seed =
      params.mode == SeedMode::kBalanced
          ? sample_balanced_seeds(labels, num_classes, params.per_class,
                                  seed_rng)
          : sample_proportional_seeds(labels, num_classes, params.rate,
                                      seed_rng);

  const std::vector<char> is_seed = split.seed.mask(n);
  std::vector<NodeId> rest;
  rest.reserve(static_cast<std::size_t>(n) - split.seed.size());
  for (NodeId i = 0; i < n; ++i) {
    if (!is_seed[i]) rest.push_back(i);
  }
  if (params.validation_size < 0 ||
      static_cast<std::size_t>(params.validation_size) > rest.size()) {
    throw std::invalid_argument(
        "make_random_split: validation size " +
        std::to_string(params.validation_size) + " exceeds the " +
        std::to_string(rest.size()) + " unlabeled nodes");
  }

  SplitRng val_rng(mix_seed(params.rng_seed, kRoleValSample));
  std::vector<NodeId> val_ids = sample_without_replacement(
      rest, static_cast<std::size_t>(params.validation_size), val_rng);
  std::vector<char> in_val(static_cast<std::size_t>(n), 0);
  for (NodeId v : val_ids) in_val[v] = 1;
  std::vector<NodeId> test_ids;
  test_ids.reserve(rest.size() - val_ids.size());
  for (NodeId v : rest) {
    if (!in_val[v]) test_ids.push_back(v);
  }

  split.validation =
      attach_labels(std::move(val_ids), labels, num_classes, "validation");
  split.test = attach_labels(std::move(test_ids), labels, num_classes, "test");
  split.validate(n);
  return split;
}

void write_split(const std::string& dir, const std::string& stem,
                 const Split& split) {
  write_id_file(role_path(dir, stem, ".seed"), split.seed.ids);
  write_id_file(role_path(dir, stem, ".val"), split.validation.ids);
  write_id_file(role_path(dir, stem, ".test"), split.test.ids);
}

Split read_split(const std::string& dir, const std::string& stem,
                 std::span<const std::int32_t> labels,
                 std::int32_t num_classes) {
  Split split;
  split.seed = attach_labels(read_id_file(role_path(dir, stem, ".seed")),
                             labels, num_classes, "seed");
  split.validation = attach_labels(read_id_file(role_path(dir, stem, ".val")),
                                   labels, num_classes, "validation");
  split.test = attach_labels(read_id_file(role_path(dir, stem, ".test")),
                             labels, num_classes, "test");
  split.validate(static_cast<NodeId>(labels.size()));
  return split;
}

void write_predictions(const std::string& path,
                       std::span<const Prediction> predictions) {
  std::ofstream out = open_for_write(path);
  for (const Prediction& p : predictions) {
    out << p.node << '\t' << p.label << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<Prediction> read_predictions(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(std::move(line));
    if (skip_line(line)) continue;
    std::int64_t v[2];
    parse_ints(path, line_no, line, v);
    if (v[0] < 0 || v[0] > std::numeric_limits<NodeId>::max()) {
      parse_fail(path, line_no, "node id out of range");
    }
    // Margins are not serialized; they read back as 0.
    out.push_back({static_cast<NodeId>(v[0]), static_cast<std::int32_t>(v[1]),
                   0.0});
  }
  return out;
}

// --- metrics ----------------------------------------------------------------------

namespace {

std::unordered_map<NodeId, std::int32_t> prediction_lookup(
    std::span<const Prediction> predictions) {
  std::unordered_map<NodeId, std::int32_t> map;
  map.reserve(predictions.size());
  for (const Prediction& p : predictions) {
    if (!map.emplace(p.node, p.label).second) {
      throw std::invalid_argument("duplicate prediction for node " +
                                  std::to_string(p.node));
    }
  }
  return map;
}

}  // namespace

double precision(std::span<const Prediction> predictions,
                 std::span<const NodeId> truth_ids,
                 std::span<const std::int32_t> truth_labels) {
  if (truth_ids.size() != truth_labels.size()) {
    throw std::invalid_argument("precision: ids/labels size mismatch");
  }
  if (truth_ids.empty()) {
    throw std::invalid_argument("precision: empty truth set");
  }
  const auto map = prediction_lookup(predictions);
  std::int64_t correct = 0;
  for (std::size_t k = 0; k < truth_ids.size(); ++k) {
    const auto it = map.find(truth_ids[k]);
    if (it == map.end()) {
      throw std::invalid_argument("precision: missing prediction for node " +
                                  std::to_string(truth_ids[k]));
    }
    if (it->second == truth_labels[k]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth_ids.size());
}

double snapshot_precision(std::span<const std::int32_t> snapshot,
                          std::span<const NodeId> truth_ids,
                          std::span<const std::int32_t> truth_labels) {
  if (truth_ids.size() != truth_labels.size()) {
    throw std::invalid_argument("snapshot_precision: ids/labels size mismatch");
  }
  if (truth_ids.empty()) {
    throw std::invalid_argument("snapshot_precision: empty truth set");
  }
  std::int64_t correct = 0;
  for (std::size_t k = 0; k < truth_ids.size(); ++k) {
    const NodeId id = truth_ids[k];
    if (id < 0 || static_cast<std::size_t>(id) >= snapshot.size()) {
      throw std::invalid_argument("snapshot_precision: node " +
                                  std::to_string(id) +
                                  " outside the labeling");
    }
    if (snapshot[id] == truth_labels[k]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth_ids.size());
}

// --- A/B protocol ------------------------------------------------------------------

double ab_protocol(
    std::span<const NodeId> test_ids,
    std::span<const std::int32_t> test_labels, std::size_t num_configs,
    const std::function<std::vector<Prediction>(std::size_t)>& run,
    std::uint64_t rng_seed) {
  if (test_ids.size() != test_labels.size()) {
    throw std::invalid_argument("ab_protocol: ids/labels size mismatch");
  }
  const std::size_t m = test_ids.size();
  if (m < 2) {
    throw std::invalid_argument(
        "ab_protocol: degenerate split — need at least two test nodes");
  }
  if (num_configs == 0) {
    throw std::invalid_argument("ab_protocol: no configurations");
  }

  // Shuffle test indices, first half A, rest B (B absorbs the odd node).
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  SplitRng rng(mix_seed(rng_seed, kRoleAbSplit));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t j = i + rng.below(m - i);
    std::swap(perm[i], perm[j]);
  }
  const std::size_t half = m / 2;

  std::vector<std::int64_t> correct_a(num_configs, 0);
  std::vector<std::int64_t> correct_b(num_configs, 0);
  for (std::size_t c = 0; c < num_configs; ++c) {
    const auto map = prediction_lookup(run(c));
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t idx = perm[k];
      const auto it = map.find(test_ids[idx]);
      if (it == map.end()) {
        throw std::invalid_argument(
            "ab_protocol: configuration " + std::to_string(c) +
            " is missing a prediction for node " +
            std::to_string(test_ids[idx]));
      }
      if (it->second == test_labels[idx]) {
        ++(k < half ? correct_a[c] : correct_b[c]);
      }
    }
  }

  // Each half is scored under the other half's best configuration.
  const auto argmax = [](std::span<const std::int64_t> xs) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < xs.size(); ++c) {
      if (xs[c] > xs[best]) best = c;  // strict: ties keep the lower index
    }
    return best;
  };
  const std::size_t star_a = argmax(correct_a);
  const std::size_t star_b = argmax(correct_b);
  return static_cast<double>(correct_b[star_a] + correct_a[star_b]) /
         static_cast<double>(m);
}

// --- unified learner front end --------------------------------------------------------

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kLp:
      return "lp";
    case Method::kNlp:
      return "nlp";
    case Method::kNs:
      return "ns";
    case Method::kFeatRaw:
      return "feat-raw";
    case Method::kFeatFp:
      return "feat-fp";
    case Method::kFeatNfp:
      return "feat-nfp";
  }
  throw std::invalid_argument("method_name: unknown method");
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kLp, Method::kNlp, Method::kNs, Method::kFeatRaw,
                   Method::kFeatFp, Method::kFeatNfp}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected lp, nlp, ns, feat-raw, feat-fp, "
                              "or feat-nfp)");
}

bool method_uses_features(Method m) {
  return m == Method::kFeatRaw || m == Method::kFeatFp ||
         m == Method::kFeatNfp;
}

bool method_uses_iterations(Method m) { return m != Method::kFeatRaw; }

bool method_uses_alpha(Method m) {
  return m == Method::kNlp || m == Method::kFeatNfp;
}

bool method_uses_delta(Method m) { return m == Method::kNs; }

namespace {

DenseMatrix diffuse_features(const CsrGraph& g, const SparseFeatureMatrix* f,
                             const LearnerParams& params) {
  if (f == nullptr) {
    throw std::invalid_argument(std::string(method_name(params.method)) +
                                " requires a feature matrix");
  }
  if (f->rows() != g.num_nodes()) {
    throw std::invalid_argument("feature matrix has " +
                                std::to_string(f->rows()) +
                                " rows for a graph of " +
                                std::to_string(g.num_nodes()) + " nodes");
  }
  switch (params.method) {
    case Method::kFeatRaw:
      return f->to_dense();
    case Method::kFeatFp:
      return feature_propagation(g, *f, params.iterations, params.threads);
    case Method::kFeatNfp:
      return norm_feature_propagation(g, *f, params.iterations, params.alpha,
                                      params.threads);
    default:
      throw std::invalid_argument("diffuse_features: not a feature method");
  }
}

std::vector<Prediction> classify_non_seeds(NodeId n,
                                           const DenseMatrix& diffused,
                                           const SeedAssignment& seeds,
                                           const LearnerParams& params) {
  DenseMatrix x(static_cast<std::int64_t>(seeds.size()), diffused.cols());
  for (std::size_t k = 0; k < seeds.ids.size(); ++k) {
    const auto src = diffused.row(seeds.ids[k]);
    std::copy(src.begin(), src.end(), x.row(static_cast<std::int64_t>(k)).begin());
  }
  const LogRegModel model = train_logreg(x, seeds.labels, seeds.num_classes,
                                         params.logreg, params.threads);
  const std::vector<char> is_seed = seeds.mask(n);
  std::vector<NodeId> nodes;
  nodes.reserve(static_cast<std::size_t>(n) - seeds.size());
  for (NodeId i = 0; i < n; ++i) {
    if (!is_seed[i]) nodes.push_back(i);
  }
  return classify(model, diffused, nodes);
}

}  // namespace

std::vector<Prediction> run_base_learner(const CsrGraph& g,
                                         const SparseFeatureMatrix* features,
                                         const SeedAssignment& seeds,
                                         const LearnerParams& params,
                                         std::uint64_t step_salt) {
  switch (params.method) {
    case Method::kLp: {
      const SoftLabelMatrix y =
          label_propagation(g, seeds, params.iterations, params.threads);
      return extract_predictions(y, seeds);
    }
    case Method::kNlp: {
      SpectralParams sp;
      sp.iterations = params.iterations;
      sp.alpha = params.alpha;
      const SoftLabelMatrix y = norm_laplacian_lp(g, seeds, sp, params.threads);
      return extract_predictions(y, seeds);
    }
    case Method::kNs: {
      SocialParams sp;
      sp.iterations = params.iterations;
      sp.delta = params.delta;
      sp.rng_seed = mix_seed(params.rng_seed, kRoleBootstrapStep, step_salt);
      const auto [soft, counts] = nearest_seed(g, seeds, sp, params.threads);
      return nearest_seed_predictions(soft, counts, seeds);
    }
    default: {
      const DenseMatrix diffused = diffuse_features(g, features, params);
      return classify_non_seeds(g.num_nodes(), diffused, seeds, params);
    }
  }
}

BaseLearner make_base_learner(const CsrGraph& g,
                              const SparseFeatureMatrix* features,
                              const LearnerParams& params) {
  if (!method_uses_features(params.method)) {
    return [params, features](const CsrGraph& graph,
                              const SeedAssignment& seeds,
                              std::uint64_t step_salt) {
      return run_base_learner(graph, features, seeds, params, step_salt);
    };
  }
  // The diffused matrix depends only on the graph and the hyperparameters,
  // never on labels — compute it once and share it across steps.
  auto diffused =
      std::make_shared<const DenseMatrix>(diffuse_features(g, features, params));
  return [params, diffused](const CsrGraph& graph,
                            const SeedAssignment& seeds, std::uint64_t) {
    return classify_non_seeds(graph.num_nodes(), *diffused, seeds, params);
  };
}

// --- sweep runner -----------------------------------------------------------------------

void SweepSpec::validate() const {
  auto check = [&](const char* name, bool used, bool empty) {
    if (used && empty) {
      throw std::invalid_argument(std::string("SweepSpec: method ") +
                                  std::string(method_name(method)) +
                                  " needs a nonempty " + name + " grid");
    }
    if (!used && !empty) {
      throw std::invalid_argument(std::string("SweepSpec: the ") + name +
                                  " grid is not used by this configuration");
    }
  };
  check("iterations", method_uses_iterations(method), iterations_grid.empty());
  check("alpha", method_uses_alpha(method), alpha_grid.empty());
  check("delta", method_uses_delta(method), delta_grid.empty());
  check("r", bootstrap, r_grid.empty());
  if (repetitions < 1) {
    throw std::invalid_argument("SweepSpec: repetitions must be positive");
  }
  if (max_steps < 0) {
    throw std::invalid_argument("SweepSpec: negative max_steps");
  }
}

std::vector<SweepCell> enumerate_cells(const SweepSpec& spec) {
  spec.validate();
  const std::vector<int> iters =
      spec.iterations_grid.empty() ? std::vector<int>{0} : spec.iterations_grid;
  const std::vector<double> alphas =
      spec.alpha_grid.empty() ? std::vector<double>{0.0} : spec.alpha_grid;
  const std::vector<double> deltas =
      spec.delta_grid.empty() ? std::vector<double>{0.0} : spec.delta_grid;
  const std::vector<double> rs =
      spec.r_grid.empty() ? std::vector<double>{0.0} : spec.r_grid;
  std::vector<SweepCell> cells;
  cells.reserve(iters.size() * alphas.size() * deltas.size() * rs.size());
  for (int t : iters) {
    for (double a : alphas) {
      for (double d : deltas) {
        for (double r : rs) cells.push_back({t, a, d, r});
      }
    }
  }
  return cells;
}

namespace {

RunResult run_cell(const SweepSpec& spec, const SweepCell& cell,
                   std::size_t cell_index, const SweepData& data, int rep) {
  RunResult row;
  row.method = spec.method;
  row.iterations = cell.iterations;
  row.alpha = cell.alpha;
  row.delta = cell.delta;
  row.r = cell.r;
  row.bootstrap = spec.bootstrap;
  row.repetition = rep;
  row.seed = mix_seed(spec.rng_seed, kRoleSweepCell,
                      static_cast<std::uint64_t>(rep),
                      static_cast<std::uint64_t>(cell_index));

  const auto t0 = std::chrono::steady_clock::now();
  try {
    LearnerParams lp;
    lp.method = spec.method;
    lp.iterations = cell.iterations;
    lp.alpha = cell.alpha;
    lp.delta = cell.delta;
    lp.logreg = spec.logreg;
    lp.rng_seed = row.seed;
    lp.threads = 1;  // cells are the parallel unit
    const SparseFeatureMatrix* feats =
        method_uses_features(spec.method) ? &data.features : nullptr;
    const Split& split = data.split;

    if (!spec.bootstrap) {
      const std::vector<Prediction> preds =
          run_base_learner(data.graph, feats, split.seed, lp, 0);
      row.step = 0;
      row.val_acc =
          precision(preds, split.validation.ids, split.validation.labels);
      row.test_acc = precision(preds, split.test.ids, split.test.labels);
    } else {
      BootstrapConfig cfg;
      cfg.r = cell.r;
      cfg.max_steps = spec.max_steps;
      cfg.validation_ids = split.validation.ids;
      cfg.validation_labels = split.validation.labels;
      const BootstrapTrace trace =
          run_bootstrap(data.graph, split.seed,
                        make_base_learner(data.graph, feats, lp), cfg);
      const BootstrapStep& chosen = trace.steps[trace.chosen_step];
      row.step = trace.chosen_step;
      row.val_acc = chosen.val_accuracy;
      row.test_acc =
          snapshot_precision(chosen.snapshot, split.test.ids, split.test.labels);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.val_acc = kNan;
    row.test_acc = kNan;
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return row;
}

}  // namespace

SweepOutcome run_sweep(const SweepSpec& spec, const SweepDataProvider& data,
                       unsigned threads) {
  spec.validate();
  const std::vector<SweepCell> cells = enumerate_cells(spec);
  SweepOutcome out;
  out.rows.resize(cells.size() * static_cast<std::size_t>(spec.repetitions));

  std::vector<double> selected_test;
  std::vector<double> selected_val;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    const SweepData instance = data(rep);
    instance.split.validate(instance.graph.num_nodes());
    RunResult* rows = out.rows.data() + cells.size() * rep;
    parallel_for(static_cast<std::int64_t>(cells.size()), threads,
                 [&](std::int64_t c) {
                   rows[c] = run_cell(spec, cells[c],
                                      static_cast<std::size_t>(c), instance,
                                      rep);
                 });

    // Validation-best cell of this repetition; earliest cell wins ties.
    std::size_t best = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!rows[c].error.empty()) continue;
      if (best == cells.size() || rows[c].val_acc > rows[best].val_acc) {
        best = c;
      }
    }
    if (best == cells.size()) {
      std::string first_error;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (!rows[c].error.empty()) {
          first_error = rows[c].error;
          break;
        }
      }
      throw std::runtime_error("run_sweep: every cell failed in repetition " +
                               std::to_string(rep) + "; first error: " +
                               first_error);
    }
    out.selected.push_back(cells.size() * rep + best);
    selected_test.push_back(rows[best].test_acc);
    selected_val.push_back(rows[best].val_acc);
  }

  out.mean_selected_test_acc = mean_of(selected_test);
  out.stddev_selected_test_acc = stddev_of(selected_test);
  out.mean_selected_val_acc = mean_of(selected_val);
  return out;
}

SweepOutcome run_sweep(const SweepSpec& spec, const SweepData& data,
                       unsigned threads) {
  return run_sweep(
      spec, [&data](int) { return data; }, threads);
}

SweepDataProvider synthetic_provider(const SyntheticProtocol& protocol) {
  return [protocol](int rep) {
    PlantedPartitionParams pp = protocol.graph;
    pp.rng_seed = mix_seed(protocol.rng_seed, kRoleGraphGen,
                           static_cast<std::uint64_t>(rep));
    PlantedPartition data = generate_planted_partition(pp);
    SplitParams sp = protocol.split;
    sp.rng_seed = mix_seed(protocol.rng_seed, kRoleSeedSample,
                           static_cast<std::uint64_t>(rep));
    SweepData out;
    out.split = make_random_split(data.labels, pp.classes, sp);
    out.graph = std::move(data.graph);
    return out;
  };
}

std::string results_csv_string(std::span<const RunResult> rows) {
  std::string out =
      "method,iters,alpha,delta,r,bootstrap,repetition,seed,step,val_acc,"
      "test_acc,wall_ms\n";
  char buf[256];
  for (const RunResult& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%s,%s,%s,%d,%d,%llu,%d,%s,%s,%.3f\n",
                  std::string(method_name(row.method)).c_str(), row.iterations,
                  fmt_param(row.alpha).c_str(), fmt_param(row.delta).c_str(),
                  fmt_param(row.r).c_str(), row.bootstrap ? 1 : 0,
                  row.repetition,
                  static_cast<unsigned long long>(row.seed), row.step,
                  fmt_acc(row.val_acc).c_str(), fmt_acc(row.test_acc).c_str(),
                  row.wall_ms);
    out += buf;
  }
  return out;
}

void write_results_csv(const std::string& path,
                       std::span<const RunResult> rows) {
  std::ofstream out = open_for_write(path);
  out << results_csv_string(rows);
  if (!out) throw std::runtime_error("failed writing " + path);
}

void write_sweep_summary_json(const std::string& path, const SweepSpec& spec,
                              const SweepOutcome& outcome) {
  using nlohmann::json;
  const std::vector<SweepCell> cells = enumerate_cells(spec);

  json j;
  j["method"] = std::string(method_name(spec.method));
  j["bootstrap"] = spec.bootstrap;
  j["repetitions"] = spec.repetitions;
  j["rng_seed"] = spec.rng_seed;
  j["max_steps"] = spec.max_steps;
  j["grids"] = {{"iterations", spec.iterations_grid},
                {"alpha", spec.alpha_grid},
                {"delta", spec.delta_grid},
                {"r", spec.r_grid}};

  json cell_stats = json::array();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> val, test;
    json errors = json::array();
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      const RunResult& row = outcome.rows[cells.size() * rep + c];
      if (row.error.empty()) {
        val.push_back(row.val_acc);
        test.push_back(row.test_acc);
      } else {
        errors.push_back({{"repetition", rep}, {"error", row.error}});
      }
    }
    json entry = {{"iterations", cells[c].iterations},
                  {"alpha", cells[c].alpha},
                  {"delta", cells[c].delta},
                  {"r", cells[c].r},
                  {"mean_val_acc", mean_of(val)},
                  {"mean_test_acc", mean_of(test)},
                  {"stddev_test_acc", stddev_of(test)}};
    if (!errors.empty()) entry["errors"] = errors;
    cell_stats.push_back(entry);
  }
  j["cells"] = cell_stats;

  json per_rep = json::array();
  for (std::size_t rep = 0; rep < outcome.selected.size(); ++rep) {
    const RunResult& row = outcome.rows[outcome.selected[rep]];
    per_rep.push_back({{"repetition", row.repetition},
                       {"cell", outcome.selected[rep] % cells.size()},
                       {"iterations", row.iterations},
                       {"alpha", row.alpha},
                       {"delta", row.delta},
                       {"r", row.r},
                       {"step", row.step},
                       {"val_acc", row.val_acc},
                       {"test_acc", row.test_acc}});
  }
  j["selected"] = {{"mean_test_acc", outcome.mean_selected_test_acc},
                   {"stddev_test_acc", outcome.stddev_selected_test_acc},
                   {"mean_val_acc", outcome.mean_selected_val_acc},
                   {"per_rep", per_rep}};

  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

// --- fixed iteration budget ------------------------------------------------------------

BudgetedOutcome budgeted_run(const SweepData& data, LearnerParams params,
                             double r, int budget, int iterations_per_step) {
  if (iterations_per_step <= 0) {
    throw std::invalid_argument(
        "budgeted_run: iterations_per_step must be positive");
  }
  if (iterations_per_step > budget) {
    throw std::invalid_argument(
        "budgeted_run: iterations_per_step " +
        std::to_string(iterations_per_step) + " exceeds the budget " +
        std::to_string(budget));
  }
  if (!method_uses_iterations(params.method)) {
    throw std::invalid_argument("budgeted_run: " +
                                std::string(method_name(params.method)) +
                                " has no iteration knob");
  }
  data.split.validate(data.graph.num_nodes());
  params.iterations = iterations_per_step;

  BootstrapConfig cfg;
  cfg.r = r;
  cfg.max_steps = budget / iterations_per_step;
  cfg.validation_ids = data.split.validation.ids;
  cfg.validation_labels = data.split.validation.labels;
  const SparseFeatureMatrix* feats =
      method_uses_features(params.method) ? &data.features : nullptr;

  BudgetedOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  out.trace = run_bootstrap(data.graph, data.split.seed,
                            make_base_learner(data.graph, feats, params), cfg);

  RunResult& row = out.result;
  row.method = params.method;
  row.iterations = iterations_per_step;
  row.alpha = method_uses_alpha(params.method) ? params.alpha : 0.0;
  row.delta = method_uses_delta(params.method) ? params.delta : 0.0;
  row.r = r;
  row.bootstrap = true;
  row.repetition = 0;
  row.seed = params.rng_seed;
  row.step = out.trace.chosen_step;
  const BootstrapStep& chosen = out.trace.steps[out.trace.chosen_step];
  row.val_acc = cfg.validation_ids.empty() ? kNan : chosen.val_accuracy;
  row.test_acc =
      data.split.test.ids.empty()
          ? kNan
          : snapshot_precision(chosen.snapshot, data.split.test.ids,
                               data.split.test.labels);
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

}  // namespace graphssl
