#pragma once

// Feature diffusion (plain and normalized-Laplacian variants) and a
// one-vs-rest logistic-regression classifier over raw or diffused features.
// Feature diffusion ignores the seed set entirely, so a diffused matrix is
// computed once per run and reused across bootstrap steps.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphssl/csr_graph.hpp"
#include "graphssl/dense_matrix.hpp"
#include "graphssl/labels.hpp"

namespace graphssl {

struct FeatureEntry {
  NodeId node = 0;
  std::int32_t feature = 0;
  double value = 1.0;
};

// Sparse n x d feature matrix; at most one entry per (node, feature).
class SparseFeatureMatrix {
 public:
  static SparseFeatureMatrix make(NodeId n, std::int32_t d,
                                  std::vector<FeatureEntry> entries);

  NodeId rows() const { return n_; }
  std::int32_t cols() const { return d_; }
  std::span<const FeatureEntry> entries() const { return entries_; }
  DenseMatrix to_dense() const;

 private:
  NodeId n_ = 0;
  std::int32_t d_ = 0;
  std::vector<FeatureEntry> entries_;  // sorted by (node, feature)
};

// T applications of the row-stochastic operator D^-1 W starting from F.
// No seed involvement and no row pinning.  T = 0 returns F unchanged.
DenseMatrix feature_propagation(const CsrGraph& g,
                                const SparseFeatureMatrix& f, int iterations,
                                unsigned threads = 1);

// T rounds of F~ <- (1-a) A F~ + a F with A = D^-1/2 W D^-1/2, from F~ = F.
DenseMatrix norm_feature_propagation(const CsrGraph& g,
                                     const SparseFeatureMatrix& f,
                                     int iterations, double alpha,
                                     unsigned threads = 1);

struct LogRegHyper {
  int epochs = 100;
  double learning_rate = 0.1;
  double l2 = 1e-4;  // applied to weights only, never the bias
};

struct LogRegModel {
  std::int32_t num_classes = 0;
  DenseMatrix weights;       // L x d
  std::vector<double> bias;  // L
};

// Mean logistic loss of one binary classifier plus (l2/2)*||w||^2; targets
// are +-1.  Exposed (with its gradient) so tests can check the analytic
// gradient against finite differences.
double binary_logreg_loss(const DenseMatrix& x,
                          std::span<const double> targets,
                          std::span<const double> w, double bias, double l2);
void binary_logreg_gradient(const DenseMatrix& x,
                            std::span<const double> targets,
                            std::span<const double> w, double bias, double l2,
                            std::span<double> grad_w, double& grad_bias);

// One-vs-rest training by full-batch gradient descent from zero weights.
// x holds one row per labeled example; y gives the class per row.  Every
// class in [0, L) must appear at least once.
LogRegModel train_logreg(const DenseMatrix& x,
                         std::span<const std::int32_t> y,
                         std::int32_t num_classes, const LogRegHyper& hyper,
                         unsigned threads = 1);

// Per-node scores are the L one-vs-rest sigmoids; label = argmax score
// (lowest class on ties), margin = top-two score gap.
std::vector<Prediction> classify(const LogRegModel& model,
                                 const DenseMatrix& features,
                                 std::span<const NodeId> nodes);

// --- feature file format ---------------------------------------------------
// UTF-8 text.  Header line "#dims n d", then one entry per line as
// "node<TAB>feature<TAB>value" (value optional, default 1.0); other '#'
// lines are comments.

SparseFeatureMatrix read_features(const std::string& path);
void write_features(const std::string& path, const SparseFeatureMatrix& f);

}  // namespace graphssl
