#include "graphssl/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace graphssl {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1), got " +
                                std::to_string(alpha));
  }
}

void reset_seed_rows(SoftLabelMatrix& y, const SeedAssignment& seeds) {
  for (std::size_t k = 0; k < seeds.ids.size(); ++k) {
    auto row = y.row(seeds.ids[k]);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = -1.0;
    row[seeds.labels[k]] = 1.0;
  }
}

}  // namespace

SoftLabelMatrix init_labels(const SeedAssignment& seeds, NodeId n,
                            std::int32_t num_classes) {
  if (num_classes < 1) {
    throw std::invalid_argument("init_labels: need at least one class");
  }
  for (std::int32_t label : seeds.labels) {
    if (label >= num_classes) {
      throw std::invalid_argument("init_labels: seed label " +
                                  std::to_string(label) + " >= L = " +
                                  std::to_string(num_classes));
    }
  }
  (void)seeds.mask(n);  // validates id range
  SoftLabelMatrix y(n, num_classes, 0.0);
  reset_seed_rows(y, seeds);
  return y;
}

SoftLabelMatrix label_propagation(const CsrGraph& g,
                                  const SeedAssignment& seeds, int iterations,
                                  unsigned threads) {
  if (iterations < 0) {
    throw std::invalid_argument("label_propagation: negative iteration count");
  }
  SoftLabelMatrix y = init_labels(seeds, g.num_nodes(), seeds.num_classes);
  for (int t = 0; t < iterations; ++t) {
    y = propagate(g, PropagationKind::RowStochastic, y, threads);
    reset_seed_rows(y, seeds);
  }
  return y;
}

SoftLabelMatrix norm_laplacian_lp(const CsrGraph& g,
                                  const SeedAssignment& seeds,
                                  const SpectralParams& params,
                                  unsigned threads) {
  check_alpha(params.alpha);
  if (params.iterations < 0) {
    throw std::invalid_argument("norm_laplacian_lp: negative iteration count");
  }
  const SoftLabelMatrix y0 =
      init_labels(seeds, g.num_nodes(), seeds.num_classes);
  SoftLabelMatrix y = y0;
  const double a = params.alpha;
  for (int t = 0; t < params.iterations; ++t) {
    SoftLabelMatrix ay = propagate(g, PropagationKind::SymmetricNormalized, y,
                                   threads);
    double* yv = ay.data();
    const double* y0v = y0.data();
    const std::size_t total =
        static_cast<std::size_t>(ay.rows()) * static_cast<std::size_t>(ay.cols());
    for (std::size_t k = 0; k < total; ++k) {
      yv[k] = (1.0 - a) * yv[k] + a * y0v[k];
    }
    y = std::move(ay);
  }
  return y;
}

SoftLabelMatrix solve_fixed_point(const CsrGraph& g,
                                  const SeedAssignment& seeds, double alpha) {
  check_alpha(alpha);
  const NodeId n = g.num_nodes();
  const std::int32_t l = seeds.num_classes;

  // Dense system matrix M = I - (1-a) A.
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    m[static_cast<std::size_t>(u) * n + u] = 1.0;
    const double du = g.degree(u);
    if (du <= 0.0) continue;
    const auto nbrs = g.neighbors(u);
    const auto wts = g.arc_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId v = nbrs[k];
      const double dv = g.degree(v);
      if (dv <= 0.0) continue;
      m[static_cast<std::size_t>(u) * n + v] -=
          (1.0 - alpha) * wts[k] / std::sqrt(du * dv);
    }
  }

  // Right-hand side B = a * Y0, solved in place column-block fashion.
  SoftLabelMatrix b = init_labels(seeds, n, l);
  for (NodeId i = 0; i < n; ++i) {
    for (std::int32_t j = 0; j < l; ++j) b(i, j) *= alpha;
  }

  // LU with partial pivoting, factor and solve against all L columns.
  std::vector<NodeId> perm(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) perm[i] = i;
  for (NodeId col = 0; col < n; ++col) {
    NodeId pivot = col;
    double best = std::abs(m[static_cast<std::size_t>(col) * n + col]);
    for (NodeId r = col + 1; r < n; ++r) {
      const double v = std::abs(m[static_cast<std::size_t>(r) * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) {
      throw std::runtime_error(
          "solve_fixed_point: numerically singular system (pivot 0 at column " +
          std::to_string(col) + ")");
    }
    if (pivot != col) {
      for (NodeId j = 0; j < n; ++j) {
        std::swap(m[static_cast<std::size_t>(col) * n + j],
                  m[static_cast<std::size_t>(pivot) * n + j]);
      }
      for (std::int32_t j = 0; j < l; ++j) std::swap(b(col, j), b(pivot, j));
    }
    const double inv = 1.0 / m[static_cast<std::size_t>(col) * n + col];
    for (NodeId r = col + 1; r < n; ++r) {
      const double factor = m[static_cast<std::size_t>(r) * n + col] * inv;
      if (factor == 0.0) continue;
      m[static_cast<std::size_t>(r) * n + col] = 0.0;
      for (NodeId j = col + 1; j < n; ++j) {
        m[static_cast<std::size_t>(r) * n + j] -=
            factor * m[static_cast<std::size_t>(col) * n + j];
      }
      for (std::int32_t j = 0; j < l; ++j) {
        b(r, j) -= factor * b(col, j);
      }
    }
  }
  // Back substitution.
  for (NodeId row = n; row-- > 0;) {
    for (NodeId j = row + 1; j < n; ++j) {
      const double coef = m[static_cast<std::size_t>(row) * n + j];
      if (coef == 0.0) continue;
      for (std::int32_t c = 0; c < l; ++c) b(row, c) -= coef * b(j, c);
    }
    const double inv = 1.0 / m[static_cast<std::size_t>(row) * n + row];
    for (std::int32_t c = 0; c < l; ++c) b(row, c) *= inv;
  }
  return b;
}

}  // namespace graphssl
