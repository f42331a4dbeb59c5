// Command-line front end: synthetic graph generation, split management,
// single runs, hyperparameter sweeps, and prediction scoring.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphssl/csr_graph.hpp"
#include "graphssl/features.hpp"
#include "graphssl/harness.hpp"
#include "graphssl/labels.hpp"
#include "graphssl/parallel.hpp"
#include "graphssl/rng.hpp"
#include "graphssl/synth.hpp"

namespace {

using namespace graphssl;

// Ground-truth label files cover every node exactly once, so the node count
// is the number of data lines.
std::pair<std::vector<std::int32_t>, std::int32_t> load_full_labels(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::string line;
  NodeId n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ++n;
  }
  std::vector<std::int32_t> labels = read_labels(path, n);
  std::int32_t num_classes = 0;
  for (std::int32_t c : labels) num_classes = std::max(num_classes, c + 1);
  return {std::move(labels), num_classes};
}

std::vector<Edge> edges_of(const CsrGraph& g) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(g.num_edges()));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v > u) edges.push_back({u, v});
    }
  }
  return edges;
}

struct DatasetArgs {
  std::string edges_path;
  std::string labels_path;
  std::string split_dir;
  std::string split_stem = "split";
  std::string features_path;
};

struct Dataset {
  CsrGraph graph;
  std::vector<std::int32_t> labels;
  std::int32_t num_classes = 0;
  SparseFeatureMatrix features;
  Split split;
};

Dataset load_dataset(const DatasetArgs& args, bool need_features) {
  Dataset d;
  auto [labels, num_classes] = load_full_labels(args.labels_path);
  d.labels = std::move(labels);
  d.num_classes = num_classes;
  const NodeId n = static_cast<NodeId>(d.labels.size());

  const EdgeList el = read_edge_list(args.edges_path);
  if (el.n > n) {
    throw std::runtime_error(args.edges_path + " references node " +
                             std::to_string(el.n - 1) + " but " +
                             args.labels_path + " only labels " +
                             std::to_string(n) + " nodes");
  }
  d.graph = CsrGraph::from_edges(el.edges, n);
  d.split = read_split(args.split_dir, args.split_stem, d.labels,
                       d.num_classes);
  if (need_features) {
    if (args.features_path.empty()) {
      throw std::runtime_error("this method requires --features");
    }
    d.features = read_features(args.features_path);
    if (d.features.rows() != n) {
      throw std::runtime_error(args.features_path + " has " +
                               std::to_string(d.features.rows()) +
                               " rows for " + std::to_string(n) + " nodes");
    }
  }
  return d;
}

int cmd_generate_pp(NodeId n, std::int32_t classes, double p, double q,
                    std::uint64_t seed, const std::string& out_dir) {
  PlantedPartitionParams params;
  params.n = n;
  params.classes = classes;
  params.p = p;
  params.q = q;
  params.rng_seed = seed;
  const PlantedPartition pp = generate_planted_partition(params);

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  const std::vector<Edge> edges = edges_of(pp.graph);
  write_edge_list((dir / "edges.tsv").string(), edges);
  write_labels((dir / "labels.tsv").string(), pp.labels);
  std::cout << "wrote " << pp.graph.num_nodes() << " nodes, " << edges.size()
            << " edges to " << out_dir << "\n";
  return 0;
}

int cmd_split(const std::string& labels_path, const std::string& mode,
              std::int64_t per_class, double rate, NodeId val_size,
              std::uint64_t seed, const std::string& out_dir) {
  const auto [labels, num_classes] = load_full_labels(labels_path);
  SplitParams params;
  params.mode =
      mode == "balanced" ? SeedMode::kBalanced : SeedMode::kProportional;
  params.per_class = per_class;
  params.rate = rate;
  params.validation_size = val_size;
  params.rng_seed = seed;
  const Split split = make_random_split(labels, num_classes, params);

  std::filesystem::create_directories(out_dir);
  write_split(out_dir, "split", split);
  std::cout << "wrote split: " << split.seed.size() << " seed, "
            << split.validation.size() << " validation, " << split.test.size()
            << " test nodes to " << out_dir << "\n";
  return 0;
}

int cmd_run(const DatasetArgs& data_args, const std::string& method_str,
            int iters, double alpha, double delta, bool bootstrap, double r,
            int max_steps, std::uint64_t seed, const std::string& out_csv,
            const std::string& pred_out, unsigned threads) {
  LearnerParams params;
  params.method = parse_method(method_str);
  params.iterations = iters;
  params.alpha = alpha;
  params.delta = delta;
  params.rng_seed = seed;
  params.threads = threads;
  const Dataset d =
      load_dataset(data_args, method_uses_features(params.method));
  d.split.validate(d.graph.num_nodes());
  const SparseFeatureMatrix* feats =
      method_uses_features(params.method) ? &d.features : nullptr;

  RunResult row;
  row.method = params.method;
  row.iterations = method_uses_iterations(params.method) ? iters : 0;
  row.alpha = method_uses_alpha(params.method) ? alpha : 0.0;
  row.delta = method_uses_delta(params.method) ? delta : 0.0;
  row.r = bootstrap ? r : 0.0;
  row.bootstrap = bootstrap;
  row.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Prediction> pred_file_rows;
  const bool has_val = !d.split.validation.ids.empty();
  const bool has_test = !d.split.test.ids.empty();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!bootstrap) {
    const std::vector<Prediction> preds =
        run_base_learner(d.graph, feats, d.split.seed, params, 0);
    row.step = 0;
    row.val_acc = has_val ? precision(preds, d.split.validation.ids,
                                      d.split.validation.labels)
                          : nan;
    row.test_acc =
        has_test ? precision(preds, d.split.test.ids, d.split.test.labels)
                 : nan;
    pred_file_rows = preds;
  } else {
    BootstrapConfig cfg;
    cfg.r = r;
    cfg.max_steps = max_steps;
    cfg.validation_ids = d.split.validation.ids;
    cfg.validation_labels = d.split.validation.labels;
    const BootstrapTrace trace = run_bootstrap(
        d.graph, d.split.seed, make_base_learner(d.graph, feats, params), cfg);
    const BootstrapStep& chosen = trace.steps[trace.chosen_step];
    row.step = trace.chosen_step;
    row.val_acc = has_val ? chosen.val_accuracy : nan;
    row.test_acc = has_test ? snapshot_precision(chosen.snapshot,
                                                 d.split.test.ids,
                                                 d.split.test.labels)
                            : nan;
    // The chosen step's full labeling, reported for every non-seed node.
    const std::vector<char> is_seed = d.split.seed.mask(d.graph.num_nodes());
    for (NodeId v = 0; v < d.graph.num_nodes(); ++v) {
      if (!is_seed[v]) pred_file_rows.push_back({v, chosen.snapshot[v], 0.0});
    }
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();

  write_results_csv(out_csv, {&row, 1});
  if (!pred_out.empty()) write_predictions(pred_out, pred_file_rows);
  std::cout << results_csv_string({&row, 1});
  return 0;
}

SweepSpec spec_from_json(const nlohmann::json& j) {
  SweepSpec spec;
  spec.method = parse_method(j.at("method").get<std::string>());
  auto grid = [&](const char* key, auto& out) {
    if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
  };
  grid("iterations", spec.iterations_grid);
  grid("alpha", spec.alpha_grid);
  grid("delta", spec.delta_grid);
  grid("r", spec.r_grid);
  spec.bootstrap = j.value("bootstrap", false);
  spec.max_steps = j.value("max_steps", 0);
  spec.repetitions = j.value("repetitions", 1);
  spec.rng_seed = j.value("seed", std::uint64_t{0});
  if (j.contains("logreg")) {
    const auto& lr = j.at("logreg");
    spec.logreg.epochs = lr.value("epochs", spec.logreg.epochs);
    spec.logreg.learning_rate =
        lr.value("learning_rate", spec.logreg.learning_rate);
    spec.logreg.l2 = lr.value("l2", spec.logreg.l2);
  }
  spec.validate();
  return spec;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              unsigned threads) {
  std::ifstream in(config_path);
  if (!in) {
    throw std::runtime_error("cannot open " + config_path + " for reading");
  }
  const nlohmann::json config = nlohmann::json::parse(in);
  const SweepSpec spec = spec_from_json(config);

  SweepDataProvider provider;
  if (config.contains("synthetic") == config.contains("data")) {
    throw std::runtime_error(
        "sweep config needs exactly one of \"synthetic\" or \"data\"");
  }
  if (config.contains("synthetic")) {
    const auto& syn = config.at("synthetic");
    SyntheticProtocol proto;
    proto.rng_seed = spec.rng_seed;
    proto.graph.n = syn.at("n").get<NodeId>();
    proto.graph.classes = syn.at("classes").get<std::int32_t>();
    proto.graph.p = syn.at("p").get<double>();
    proto.graph.q = syn.at("q").get<double>();
    const std::string mode = syn.value("mode", std::string("proportional"));
    if (mode != "balanced" && mode != "proportional") {
      throw std::runtime_error("synthetic.mode must be balanced or "
                               "proportional");
    }
    proto.split.mode =
        mode == "balanced" ? SeedMode::kBalanced : SeedMode::kProportional;
    proto.split.per_class = syn.value("per_class", std::int64_t{1});
    proto.split.rate = syn.value("rate", 0.1);
    proto.split.validation_size = syn.value("val_size", NodeId{500});
    provider = synthetic_provider(proto);
  } else {
    const auto& dj = config.at("data");
    DatasetArgs args;
    args.edges_path = dj.at("edges").get<std::string>();
    args.labels_path = dj.at("labels").get<std::string>();
    args.split_dir = dj.at("split_dir").get<std::string>();
    args.split_stem = dj.value("split_stem", std::string("split"));
    args.features_path = dj.value("features", std::string());
    auto shared = std::make_shared<Dataset>(
        load_dataset(args, method_uses_features(spec.method)));
    provider = [shared](int) {
      SweepData d;
      d.graph = shared->graph;
      d.features = shared->features;
      d.split = shared->split;
      return d;
    };
  }

  const SweepOutcome outcome = run_sweep(spec, provider, threads);
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  write_results_csv((dir / "results.csv").string(), outcome.rows);
  write_sweep_summary_json((dir / "summary.json").string(), spec, outcome);
  std::printf("selected-by-validation test accuracy: %.6f +- %.6f over %d "
              "repetitions\n",
              outcome.mean_selected_test_acc,
              outcome.stddev_selected_test_acc, spec.repetitions);
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path) {
  const std::vector<Prediction> preds = read_predictions(pred_path);
  if (preds.empty()) throw std::runtime_error(pred_path + " holds no predictions");
  const auto [truth, num_classes] = load_full_labels(truth_path);
  std::vector<NodeId> ids;
  std::vector<std::int32_t> labels;
  ids.reserve(preds.size());
  labels.reserve(preds.size());
  for (const Prediction& p : preds) {
    if (p.node < 0 || static_cast<std::size_t>(p.node) >= truth.size()) {
      throw std::runtime_error("prediction for node " + std::to_string(p.node) +
                               " outside the truth labeling");
    }
    ids.push_back(p.node);
    labels.push_back(truth[p.node]);
  }
  std::printf("precision %.6f\n", precision(preds, ids, labels));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based semi-supervised node classification"};
  app.require_subcommand(1);
  app.fallthrough(true);

  unsigned threads = hardware_threads();
  app.add_option("--threads", threads, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);

  // generate-pp
  NodeId gen_n = 0;
  std::int32_t gen_classes = 2;
  double gen_p = 0.0, gen_q = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate-pp",
                                     "Generate a planted-partition graph");
  gen->add_option("--n", gen_n, "Number of nodes")->required();
  gen->add_option("--classes", gen_classes, "Number of classes")->required();
  gen->add_option("--p", gen_p, "Intra-class edge probability")->required();
  gen->add_option("--q", gen_q, "Inter-class edge probability")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out-dir", gen_out, "Output directory")->required();

  // split
  std::string split_labels, split_mode = "balanced", split_out;
  std::int64_t split_per_class = 1;
  double split_rate = 0.1;
  NodeId split_val = 500;
  std::uint64_t split_seed = 0;
  CLI::App* spl = app.add_subcommand("split",
                                     "Sample a seed/validation/test split");
  spl->add_option("--labels", split_labels, "Ground-truth label file")
      ->required();
  spl->add_option("--mode", split_mode, "balanced or proportional")
      ->check(CLI::IsMember({"balanced", "proportional"}));
  spl->add_option("--per-class", split_per_class,
                  "Seeds per class (balanced mode)");
  spl->add_option("--rate", split_rate, "Seed fraction (proportional mode)");
  spl->add_option("--val-size", split_val, "Validation set size");
  spl->add_option("--seed", split_seed, "RNG seed");
  spl->add_option("--out-dir", split_out, "Output directory")->required();

  // run
  DatasetArgs run_data;
  std::string run_method, run_out = "results.csv", run_pred_out;
  int run_iters = 10, run_max_steps = 0;
  double run_alpha = 0.1, run_delta = 1.0, run_r = 0.1;
  bool run_bootstrap_flag = false;
  std::uint64_t run_seed = 0;
  CLI::App* run = app.add_subcommand("run", "One learner configuration");
  run->add_option("--method", run_method,
                  "lp, nlp, ns, feat-raw, feat-fp, or feat-nfp")
      ->required();
  run->add_option("--edges", run_data.edges_path, "Edge list file")->required();
  run->add_option("--labels", run_data.labels_path, "Ground-truth label file")
      ->required();
  run->add_option("--split-dir", run_data.split_dir, "Split directory")
      ->required();
  run->add_option("--split-stem", run_data.split_stem,
                  "Split file stem (default: split)");
  run->add_option("--features", run_data.features_path,
                  "Feature file (feat-* methods)");
  run->add_option("--iters", run_iters, "Diffusion iterations T");
  run->add_option("--alpha", run_alpha, "Return probability (nlp, feat-nfp)");
  run->add_option("--delta", run_delta, "Arc length offset (ns)");
  run->add_flag("--bootstrap", run_bootstrap_flag, "Wrap in self-training");
  run->add_option("--r", run_r, "Promotion fraction per bootstrap step");
  run->add_option("--max-steps", run_max_steps,
                  "Bootstrap step cap (0 = until S equals V)");
  run->add_option("--seed", run_seed, "RNG seed");
  run->add_option("--out", run_out, "Results CSV path");
  run->add_option("--pred-out", run_pred_out, "Prediction file path");

  // sweep
  std::string sweep_config, sweep_out;
  CLI::App* swp = app.add_subcommand("sweep", "Hyperparameter grid sweep");
  swp->add_option("--config", sweep_config, "Sweep configuration JSON")
      ->required();
  swp->add_option("--out-dir", sweep_out, "Output directory")->required();

  // eval
  std::string eval_pred, eval_truth;
  CLI::App* evl = app.add_subcommand("eval", "Score a prediction file");
  evl->add_option("--predictions", eval_pred, "Prediction file")->required();
  evl->add_option("--truth", eval_truth, "Ground-truth label file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate_pp(gen_n, gen_classes, gen_p, gen_q, gen_seed,
                             gen_out);
    }
    if (spl->parsed()) {
      return cmd_split(split_labels, split_mode, split_per_class, split_rate,
                       split_val, split_seed, split_out);
    }
    if (run->parsed()) {
      return cmd_run(run_data, run_method, run_iters, run_alpha, run_delta,
                     run_bootstrap_flag, run_r, run_max_steps, run_seed,
                     run_out, run_pred_out, threads);
    }
    if (swp->parsed()) return cmd_sweep(sweep_config, sweep_out, threads);
    if (evl->parsed()) return cmd_eval(eval_pred, eval_truth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
