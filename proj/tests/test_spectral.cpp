#include "graphssl/spectral.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "graphssl/rng.hpp"
#include "graphssl/synth.hpp"

using namespace graphssl;

namespace {

// Path 0-1-2-3 with class-0 seed at node 0 and class-1 seed at node 3.
struct PathFixture {
  CsrGraph g = CsrGraph::from_edges(
      std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}, 4);
  SeedAssignment seeds = SeedAssignment::make({0, 3}, {0, 1}, 2);
};

double frobenius(const DenseMatrix& m) {
  double ss = 0.0;
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    for (std::int64_t j = 0; j < m.cols(); ++j) ss += m(i, j) * m(i, j);
  }
  return std::sqrt(ss);
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), a.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

PlantedPartition small_pp(NodeId n, std::int32_t classes, std::uint64_t seed) {
  PlantedPartitionParams params;
  params.n = n;
  params.classes = classes;
  params.p = 0.25;
  params.q = 0.05;
  params.rng_seed = seed;
  return generate_planted_partition(params);
}

SeedAssignment few_seeds(const std::vector<std::int32_t>& labels,
                         std::int32_t classes, std::uint64_t seed) {
  SplitRng rng(seed);
  return sample_balanced_seeds(labels, classes, 2, rng);
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("init_labels encodes seeds as signed one-hot rows") {
  const PathFixture f;
  const SoftLabelMatrix y = init_labels(f.seeds, 4, 2);
  CHECK(y(0, 0) == 1.0);
  CHECK(y(0, 1) == -1.0);
  CHECK(y(3, 0) == -1.0);
  CHECK(y(3, 1) == 1.0);
  CHECK(y(1, 0) == 0.0);
  CHECK(y(1, 1) == 0.0);
  CHECK(y(2, 0) == 0.0);

  CHECK_THROWS_AS(init_labels(f.seeds, 4, 0), std::invalid_argument);
}

TEST_CASE("label propagation with zero iterations returns the encoding") {
  const PathFixture f;
  CHECK(label_propagation(f.g, f.seeds, 0) == init_labels(f.seeds, 4, 2));
}

TEST_CASE("label propagation on the path, by hand") {
  const PathFixture f;

  const SoftLabelMatrix y1 = label_propagation(f.g, f.seeds, 1);
  CHECK(y1(1, 0) == 0.5);
  CHECK(y1(1, 1) == -0.5);
  CHECK(y1(2, 0) == -0.5);
  CHECK(y1(2, 1) == 0.5);

  const SoftLabelMatrix y2 = label_propagation(f.g, f.seeds, 2);
  // Node 1 averages the re-pinned seed row of node 0 and the round-1 row of
  // node 2: ([1,-1] + [-0.5,0.5]) / 2.
  CHECK(y2(1, 0) == 0.25);
  CHECK(y2(1, 1) == -0.25);
  CHECK(y2(2, 0) == -0.25);
  CHECK(y2(2, 1) == 0.25);
}

TEST_CASE("seed rows are re-pinned after every round") {
  const PlantedPartition pp = small_pp(40, 2, 5);
  const SeedAssignment seeds = few_seeds(pp.labels, 2, 6);
  const SoftLabelMatrix y0 = init_labels(seeds, 40, 2);
  for (int t : {1, 2, 7}) {
    const SoftLabelMatrix y = label_propagation(pp.graph, seeds, t);
    for (std::size_t k = 0; k < seeds.ids.size(); ++k) {
      const NodeId s = seeds.ids[k];
      CHECK(y(s, 0) == y0(s, 0));  // exact, not approximate
      CHECK(y(s, 1) == y0(s, 1));
    }
  }
}

TEST_CASE("disconnected components stay pure") {
  // Two disjoint paths; each component holds seeds of one class only.
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {3, 4}, {4, 5}};
  const CsrGraph g = CsrGraph::from_edges(edges, 6);
  const SeedAssignment seeds = SeedAssignment::make({0, 3}, {0, 1}, 2);

  const SoftLabelMatrix y = label_propagation(g, seeds, 6);
  for (const Prediction& p : extract_predictions(y, seeds)) {
    CHECK(p.label == (p.node < 3 ? 0 : 1));
  }
}

TEST_CASE("label propagation is bit-identical across thread counts") {
  const PlantedPartition pp = small_pp(60, 3, 7);
  const SeedAssignment seeds = few_seeds(pp.labels, 3, 8);
  CHECK(label_propagation(pp.graph, seeds, 5, 1) ==
        label_propagation(pp.graph, seeds, 5, 4));
}

TEST_CASE("normalized-laplacian iteration on the path, by hand") {
  const PathFixture f;
  SpectralParams params;
  params.iterations = 1;
  params.alpha = 0.5;
  const SoftLabelMatrix y = norm_laplacian_lp(f.g, f.seeds, params);

  const double s2 = std::sqrt(2.0);
  // Seed rows are not pinned: they blend the operator output with alpha*Y0.
  CHECK(y(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(y(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
  // Node 1 receives the node-0 encoding through arc weight 1/sqrt(1*2).
  CHECK(y(1, 0) == doctest::Approx(0.5 / s2).epsilon(1e-15));
  CHECK(y(1, 1) == doctest::Approx(-0.5 / s2).epsilon(1e-15));
  CHECK(y(2, 0) == doctest::Approx(-0.5 / s2).epsilon(1e-15));
}

TEST_CASE("normalized-laplacian parameters are validated") {
  const PathFixture f;
  SpectralParams params;
  params.iterations = 1;
  for (double bad : {0.0, 1.0, -0.2, 1.5}) {
    params.alpha = bad;
    CHECK_THROWS_AS(norm_laplacian_lp(f.g, f.seeds, params),
                    std::invalid_argument);
  }
  params.alpha = 0.1;
  params.iterations = 0;
  CHECK(norm_laplacian_lp(f.g, f.seeds, params) ==
        init_labels(f.seeds, 4, 2));
}

TEST_CASE("fixed-point solver satisfies its own equation") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const PlantedPartition pp = small_pp(60, 3, seed);
    const SeedAssignment seeds = few_seeds(pp.labels, 3, seed + 10);
    const double alpha = 0.2;

    const SoftLabelMatrix y = solve_fixed_point(pp.graph, seeds, alpha);
    const SoftLabelMatrix y0 = init_labels(seeds, 60, 3);
    const DenseMatrix ay =
        propagate(pp.graph, PropagationKind::SymmetricNormalized, y);
    // Residual of Y = (1-a) A Y + a Y0.
    double max_residual = 0.0;
    for (std::int64_t i = 0; i < y.rows(); ++i) {
      for (std::int64_t j = 0; j < y.cols(); ++j) {
        const double rhs = (1.0 - alpha) * ay(i, j) + alpha * y0(i, j);
        max_residual = std::max(max_residual, std::abs(y(i, j) - rhs));
      }
    }
    CHECK(max_residual <= 1e-10);
  }
}

TEST_CASE("the iteration converges to the solved fixed point") {
  int rotation = 0;
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const NodeId n = 50 + 30 * rotation;
    const PlantedPartition pp = small_pp(n, 2, seed);
    const SeedAssignment seeds = few_seeds(pp.labels, 2, seed + 20);
    // Alphas for which (1-alpha)^500 is far below the tolerance.
    const double alpha = std::vector<double>{0.05, 0.1, 0.2}[rotation++];

    SpectralParams params;
    params.iterations = 500;
    params.alpha = alpha;
    const SoftLabelMatrix iterated = norm_laplacian_lp(pp.graph, seeds, params);
    const SoftLabelMatrix solved = solve_fixed_point(pp.graph, seeds, alpha);
    CHECK(DenseMatrix::max_abs_diff(iterated, solved) <= 1e-6);
  }
}

TEST_CASE("deviation from the fixed point contracts geometrically") {
  // The symmetric-normalized operator has spectral norm at most one, so in
  // Frobenius norm each round shrinks the deviation by at least (1-alpha).
  const PlantedPartition pp = small_pp(50, 2, 21);
  const SeedAssignment seeds = few_seeds(pp.labels, 2, 22);
  const double alpha = 0.1;
  const SoftLabelMatrix fixed = solve_fixed_point(pp.graph, seeds, alpha);

  SpectralParams params;
  params.alpha = alpha;
  double prev = -1.0;
  for (int t : {1, 2, 3, 5, 8, 13}) {
    params.iterations = t;
    const double dev =
        frobenius(subtract(norm_laplacian_lp(pp.graph, seeds, params), fixed));
    if (prev >= 0.0) {
      CHECK(dev <= prev * (1.0 - alpha) + 1e-12);
    }
    prev = dev;
  }
}

TEST_SUITE_END();
