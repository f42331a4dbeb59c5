#include "graphssl/csr_graph.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "graphssl/parallel.hpp"
#include "graphssl/rng.hpp"

using namespace graphssl;

namespace {

// Path 0-1-2-3.
CsrGraph path4() {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}};
  return CsrGraph::from_edges(edges, 4);
}

CsrGraph random_graph(NodeId n, int extra_edges, std::uint64_t seed) {
  std::vector<Edge> edges;
  SplitRng rng(seed);
  for (NodeId v = 1; v < n; ++v) {  // spanning tree keeps it connected
    edges.push_back({static_cast<NodeId>(rng.below(v)), v});
  }
  for (int k = 0; k < extra_edges; ++k) {
    const NodeId u = static_cast<NodeId>(rng.below(n));
    const NodeId v = static_cast<NodeId>(rng.below(n));
    if (u != v) edges.push_back({u, v});
  }
  return CsrGraph::from_edges(edges, n);
}

DenseMatrix random_matrix(std::int64_t rows, std::int64_t cols,
                          std::uint64_t seed) {
  DenseMatrix m(rows, cols);
  SplitRng rng(seed);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      m(i, j) = rng.uniform() * 2.0 - 1.0;
    }
  }
  return m;
}

std::string temp_file(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("from_edges builds canonical adjacency") {
  // Triangle plus a pendant, with shuffled and duplicated input.
  const std::vector<Edge> edges{{2, 1}, {0, 2}, {1, 0}, {3, 2}, {0, 1}};
  const CsrGraph g = CsrGraph::from_edges(edges, 4);

  CHECK(g.num_nodes() == 4);
  CHECK(g.num_edges() == 4);  // the duplicate {0,1} collapsed
  CHECK(g.num_arcs() == 8);

  const auto n0 = g.neighbors(0);
  REQUIRE(n0.size() == 2);
  CHECK(n0[0] == 1);  // sorted
  CHECK(n0[1] == 2);
  CHECK(g.degree(0) == 2.0);
  CHECK(g.degree(3) == 1.0);

  const auto w2 = g.arc_weights(2);
  for (double w : w2) CHECK(w == 1.0);

  // Global arc indexing is contiguous per row.
  CHECK(g.arc_begin(0) == 0);
  CHECK(g.arc_begin(1) == 2);
}

TEST_CASE("from_edges rejects bad input") {
  CHECK_THROWS_AS(CsrGraph::from_edges(std::vector<Edge>{{0, 0}}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(CsrGraph::from_edges(std::vector<Edge>{{0, 2}}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(CsrGraph::from_edges(std::vector<Edge>{{-1, 1}}, 2),
                  std::invalid_argument);
}

TEST_CASE("row-stochastic propagation on the path, by hand") {
  const CsrGraph g = path4();
  DenseMatrix y(4, 2);
  y(0, 0) = 1.0;
  y(3, 1) = 1.0;

  const DenseMatrix z = propagate(g, PropagationKind::RowStochastic, y);
  // Node 0 averages its single neighbor 1 (all zero), node 1 averages
  // nodes 0 and 2, and so on.
  CHECK(z(0, 0) == 0.0);
  CHECK(z(1, 0) == 0.5);
  CHECK(z(1, 1) == 0.0);
  CHECK(z(2, 0) == 0.0);
  CHECK(z(2, 1) == 0.5);
  CHECK(z(3, 1) == 0.0);
}

TEST_CASE("symmetric-normalized propagation on the path, by hand") {
  const CsrGraph g = path4();
  DenseMatrix y(4, 1);
  y(1, 0) = 1.0;

  const DenseMatrix z = propagate(g, PropagationKind::SymmetricNormalized, y);
  // Arc (0,1) carries 1/sqrt(1*2), arc (2,1) carries 1/sqrt(2*2).
  CHECK(z(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(z(1, 0) == 0.0);
  CHECK(z(2, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(z(3, 0) == 0.0);
}

TEST_CASE("isolated nodes produce all-zero rows") {
  // Node 2 has no edges.
  const CsrGraph g =
      CsrGraph::from_edges(std::vector<Edge>{{0, 1}}, 3);
  DenseMatrix y(3, 2, 1.0);
  for (PropagationKind kind : {PropagationKind::RowStochastic,
                               PropagationKind::SymmetricNormalized}) {
    const DenseMatrix z = propagate(g, kind, y);
    CHECK(z(2, 0) == 0.0);
    CHECK(z(2, 1) == 0.0);
  }
}

TEST_CASE("row-stochastic propagation preserves constant vectors") {
  const CsrGraph g = random_graph(40, 80, 1);
  DenseMatrix y(40, 1, 1.0);
  const DenseMatrix z = propagate(g, PropagationKind::RowStochastic, y);
  for (NodeId i = 0; i < 40; ++i) {
    CHECK(z(i, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("propagation is bit-identical across thread counts") {
  const CsrGraph g = random_graph(60, 150, 2);
  const DenseMatrix y = random_matrix(60, 3, 5);
  for (PropagationKind kind : {PropagationKind::RowStochastic,
                               PropagationKind::SymmetricNormalized}) {
    const DenseMatrix a = propagate(g, kind, y, 1);
    const DenseMatrix b = propagate(g, kind, y, 3);
    const DenseMatrix c = propagate(g, kind, y, 7);
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("propagation commutes with node relabeling") {
  const NodeId n = 30;
  const CsrGraph g = random_graph(n, 60, 3);
  const DenseMatrix y = random_matrix(n, 2, 8);

  // Deterministic permutation.
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  SplitRng rng(4);
  for (NodeId i = 0; i + 1 < n; ++i) {
    std::swap(perm[i], perm[i + rng.below(n - i)]);
  }

  std::vector<Edge> mapped;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v > u) mapped.push_back({perm[u], perm[v]});
    }
  }
  const CsrGraph h = CsrGraph::from_edges(mapped, n);
  DenseMatrix y_perm(n, 2);
  for (NodeId u = 0; u < n; ++u) {
    y_perm(perm[u], 0) = y(u, 0);
    y_perm(perm[u], 1) = y(u, 1);
  }

  for (PropagationKind kind : {PropagationKind::RowStochastic,
                               PropagationKind::SymmetricNormalized}) {
    const DenseMatrix zg = propagate(g, kind, y);
    const DenseMatrix zh = propagate(h, kind, y_perm);
    DenseMatrix zg_perm(n, 2);
    for (NodeId u = 0; u < n; ++u) {
      zg_perm(perm[u], 0) = zg(u, 0);
      zg_perm(perm[u], 1) = zg(u, 1);
    }
    // Accumulation order changes under relabeling, so allow rounding noise.
    CHECK(DenseMatrix::max_abs_diff(zg_perm, zh) < 1e-14);
  }
}

TEST_CASE("edge list files round-trip") {
  const std::string path = temp_file("graphssl_edges_test.tsv");
  const std::vector<Edge> edges{{0, 3}, {1, 2}, {2, 3}};
  write_edge_list(path, edges);

  const EdgeList back = read_edge_list(path);
  CHECK(back.n == 4);
  CHECK(back.edges == edges);
  std::filesystem::remove(path);
}

TEST_CASE("edge list reader tolerates comments and flags junk") {
  const std::string path = temp_file("graphssl_edges_junk.tsv");
  {
    std::ofstream out(path);
    out << "# a comment\n0\t1\n\n2\t1\n";
  }
  const EdgeList ok = read_edge_list(path);
  CHECK(ok.edges.size() == 2);
  CHECK(ok.n == 3);

  {
    std::ofstream out(path);
    out << "0\tx\n";
  }
  CHECK_THROWS(read_edge_list(path));

  {
    std::ofstream out(path);
    out << "0 1\n";  // spaces instead of a tab
  }
  CHECK_THROWS(read_edge_list(path));
  std::filesystem::remove(path);
}

TEST_CASE("dense matrix reductions") {
  DenseMatrix a(2, 2), b(2, 2), c(3, 2);
  a(0, 0) = 1.0;
  b(0, 0) = -2.0;
  b(1, 1) = 0.5;
  CHECK(DenseMatrix::max_abs_diff(a, b) == 3.0);
  CHECK(b.max_abs() == 2.0);
  CHECK_THROWS_AS(DenseMatrix::max_abs_diff(a, c), std::invalid_argument);
  CHECK(a == a);
  CHECK(!(a == b));
}

TEST_CASE("parallel_blocks covers the range exactly once") {
  const std::int64_t n = 1000;
  std::vector<std::atomic<int>> hits(n);
  for (auto& h : hits) h = 0;
  parallel_blocks(n, 4, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) ++hits[i];
  });
  for (std::int64_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
}

TEST_CASE("parallel_blocks propagates worker exceptions") {
  CHECK_THROWS_AS(
      parallel_blocks(100, 4,
                      [](std::int64_t begin, std::int64_t) {
                        if (begin > 0) throw std::runtime_error("boom");
                      }),
      std::runtime_error);
}

TEST_SUITE_END();
