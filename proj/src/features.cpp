#include "graphssl/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "graphssl/parallel.hpp"

namespace graphssl {
namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

SparseFeatureMatrix SparseFeatureMatrix::make(
    NodeId n, std::int32_t d, std::vector<FeatureEntry> entries) {
  for (const FeatureEntry& e : entries) {
    if (e.node < 0 || e.node >= n) {
      throw std::invalid_argument("SparseFeatureMatrix: node " +
                                  std::to_string(e.node) + " out of range");
    }
    if (e.feature < 0 || e.feature >= d) {
      throw std::invalid_argument("SparseFeatureMatrix: feature " +
                                  std::to_string(e.feature) + " out of range");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const FeatureEntry& a, const FeatureEntry& b) {
              if (a.node != b.node) return a.node < b.node;
              return a.feature < b.feature;
            });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].node == entries[k - 1].node &&
        entries[k].feature == entries[k - 1].feature) {
      throw std::invalid_argument(
          "SparseFeatureMatrix: duplicate entry at (" +
          std::to_string(entries[k].node) + ", " +
          std::to_string(entries[k].feature) + ")");
    }
  }
  SparseFeatureMatrix f;
  f.n_ = n;
  f.d_ = d;
  f.entries_ = std::move(entries);
  return f;
}

DenseMatrix SparseFeatureMatrix::to_dense() const {
  DenseMatrix m(n_, d_, 0.0);
  for (const FeatureEntry& e : entries_) m(e.node, e.feature) = e.value;
  return m;
}

DenseMatrix feature_propagation(const CsrGraph& g,
                                const SparseFeatureMatrix& f, int iterations,
                                unsigned threads) {
  if (f.rows() != g.num_nodes()) {
    throw std::invalid_argument("feature_propagation: row count mismatch");
  }
  if (iterations < 0) {
    throw std::invalid_argument("feature_propagation: negative iterations");
  }
  DenseMatrix out = f.to_dense();
  for (int t = 0; t < iterations; ++t) {
    out = propagate(g, PropagationKind::RowStochastic, out, threads);
  }
  return out;
}

DenseMatrix norm_feature_propagation(const CsrGraph& g,
                                     const SparseFeatureMatrix& f,
                                     int iterations, double alpha,
                                     unsigned threads) {
  if (f.rows() != g.num_nodes()) {
    throw std::invalid_argument("norm_feature_propagation: row count mismatch");
  }
  if (iterations < 0) {
    throw std::invalid_argument(
        "norm_feature_propagation: negative iterations");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("norm_feature_propagation: alpha outside (0,1)");
  }
  const DenseMatrix f0 = f.to_dense();
  DenseMatrix out = f0;
  for (int t = 0; t < iterations; ++t) {
    DenseMatrix af =
        propagate(g, PropagationKind::SymmetricNormalized, out, threads);
    double* av = af.data();
    const double* fv = f0.data();
    const std::size_t total = static_cast<std::size_t>(af.rows()) * af.cols();
    for (std::size_t k = 0; k < total; ++k) {
      av[k] = (1.0 - alpha) * av[k] + alpha * fv[k];
    }
    out = std::move(af);
  }
  return out;
}

double binary_logreg_loss(const DenseMatrix& x,
                          std::span<const double> targets,
                          std::span<const double> w, double bias, double l2) {
  const std::int64_t m = x.rows();
  const std::int64_t d = x.cols();
  if (targets.size() != static_cast<std::size_t>(m) ||
      w.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("binary_logreg_loss: dimension mismatch");
  }
  double loss = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const auto row = x.row(i);
    double f = bias;
    for (std::int64_t j = 0; j < d; ++j) f += w[j] * row[j];
    loss += softplus(-targets[i] * f);
  }
  loss /= static_cast<double>(m);
  double reg = 0.0;
  for (double wj : w) reg += wj * wj;
  return loss + 0.5 * l2 * reg;
}

void binary_logreg_gradient(const DenseMatrix& x,
                            std::span<const double> targets,
                            std::span<const double> w, double bias, double l2,
                            std::span<double> grad_w, double& grad_bias) {
  const std::int64_t m = x.rows();
  const std::int64_t d = x.cols();
  if (targets.size() != static_cast<std::size_t>(m) ||
      w.size() != static_cast<std::size_t>(d) ||
      grad_w.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("binary_logreg_gradient: dimension mismatch");
  }
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_bias = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const auto row = x.row(i);
    double f = bias;
    for (std::int64_t j = 0; j < d; ++j) f += w[j] * row[j];
    // d/df softplus(-t f) = -t * sigmoid(-t f)
    const double coef = -targets[i] * sigmoid(-targets[i] * f);
    for (std::int64_t j = 0; j < d; ++j) grad_w[j] += coef * row[j];
    grad_bias += coef;
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::int64_t j = 0; j < d; ++j) {
    grad_w[j] = grad_w[j] * inv_m + l2 * w[j];
  }
  grad_bias *= inv_m;
}

LogRegModel train_logreg(const DenseMatrix& x,
                         std::span<const std::int32_t> y,
                         std::int32_t num_classes, const LogRegHyper& hyper,
                         unsigned threads) {
  const std::int64_t m = x.rows();
  const std::int64_t d = x.cols();
  if (y.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("train_logreg: label count != row count");
  }
  if (num_classes < 2) {
    throw std::invalid_argument("train_logreg: need at least two classes");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (std::int32_t label : y) {
    if (label < 0 || label >= num_classes) {
      throw std::invalid_argument("train_logreg: label out of range");
    }
    ++counts[label];
  }
  for (std::int32_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) {
      throw std::invalid_argument("train_logreg: class " + std::to_string(c) +
                                  " absent from training data — it could "
                                  "never be predicted");
    }
  }

  LogRegModel model;
  model.num_classes = num_classes;
  model.weights = DenseMatrix(num_classes, d, 0.0);
  model.bias.assign(static_cast<std::size_t>(num_classes), 0.0);

  // The L binary problems are independent; parallelize across classes.
  parallel_for(num_classes, threads, [&](std::int64_t c) {
    std::vector<double> targets(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
      targets[i] = y[i] == static_cast<std::int32_t>(c) ? 1.0 : -1.0;
    }
    std::vector<double> w(static_cast<std::size_t>(d), 0.0);
    double bias = 0.0;
    std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
    double grad_bias = 0.0;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
      binary_logreg_gradient(x, targets, w, bias, hyper.l2, grad, grad_bias);
      for (std::int64_t j = 0; j < d; ++j) {
        w[j] -= hyper.learning_rate * grad[j];
      }
      bias -= hyper.learning_rate * grad_bias;
    }
    auto out = model.weights.row(c);
    std::copy(w.begin(), w.end(), out.begin());
    model.bias[c] = bias;
  });
  return model;
}

std::vector<Prediction> classify(const LogRegModel& model,
                                 const DenseMatrix& features,
                                 std::span<const NodeId> nodes) {
  const std::int64_t d = features.cols();
  if (model.weights.cols() != d) {
    throw std::invalid_argument("classify: model dimension " +
                                std::to_string(model.weights.cols()) +
                                " != feature dimension " + std::to_string(d));
  }
  std::vector<Prediction> out;
  out.reserve(nodes.size());
  std::vector<double> scores(static_cast<std::size_t>(model.num_classes));
  for (NodeId node : nodes) {
    if (node < 0 || node >= features.rows()) {
      throw std::invalid_argument("classify: node id out of range");
    }
    const auto row = features.row(node);
    for (std::int32_t c = 0; c < model.num_classes; ++c) {
      const auto w = model.weights.row(c);
      double f = model.bias[c];
      for (std::int64_t j = 0; j < d; ++j) f += w[j] * row[j];
      scores[c] = sigmoid(f);
    }
    out.push_back(predict_row(scores, node));
  }
  return out;
}

SparseFeatureMatrix read_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open features: " + path);
  std::string line;
  NodeId n = -1;
  std::int32_t d = -1;
  std::vector<FeatureEntry> entries;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("#dims", 0) == 0) {
      std::istringstream hdr(line.substr(5));
      long hn = 0, hd = 0;
      if (!(hdr >> hn >> hd) || hn < 0 || hd < 0) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed '#dims n d' header");
      }
      n = static_cast<NodeId>(hn);
      d = static_cast<std::int32_t>(hd);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (n < 0) {
      throw std::runtime_error(path + ": entry before '#dims n d' header");
    }
    std::istringstream fields(line);
    long node = 0, feature = 0;
    double value = 1.0;
    if (!(fields >> node >> feature)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'node<TAB>feature[<TAB>value]'");
    }
    fields >> value;  // optional; default stays 1.0
    entries.push_back({static_cast<NodeId>(node),
                       static_cast<std::int32_t>(feature), value});
  }
  if (n < 0) throw std::runtime_error(path + ": missing '#dims n d' header");
  return SparseFeatureMatrix::make(n, d, std::move(entries));
}

void write_features(const std::string& path, const SparseFeatureMatrix& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write features: " + path);
  out << "#dims " << f.rows() << ' ' << f.cols() << '\n';
  for (const FeatureEntry& e : f.entries()) {
    out << e.node << '\t' << e.feature << '\t' << e.value << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace graphssl
