#pragma once

// Immutable undirected graph in compressed sparse row form, plus the two
// normalized propagation operators used by the diffusion algorithms.
//
// Both directions of every undirected edge are stored as arcs.  Neighbor
// lists are sorted and duplicate-free (canonical form), which makes graph
// equality meaningful and iteration order deterministic.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphssl/dense_matrix.hpp"

namespace graphssl {

using NodeId = std::int32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class CsrGraph {
 public:
  CsrGraph() = default;

  // Builds the canonical CSR form from an undirected edge list: both arc
  // directions inserted, unit weights, duplicates collapsed.  Rejects
  // self-loops and out-of-range endpoints.
  static CsrGraph from_edges(std::span<const Edge> edges, NodeId n);

  NodeId num_nodes() const { return n_; }
  std::int64_t num_arcs() const {
    return static_cast<std::int64_t>(col_indices_.size());
  }
  std::int64_t num_edges() const { return num_arcs() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {col_indices_.data() + row_offsets_[u],
            static_cast<std::size_t>(row_offsets_[u + 1] - row_offsets_[u])};
  }
  std::span<const double> arc_weights(NodeId u) const {
    return {edge_weights_.data() + row_offsets_[u],
            static_cast<std::size_t>(row_offsets_[u + 1] - row_offsets_[u])};
  }
  // Global index of u's first arc; arc k of node u has global index
  // arc_begin(u) + k.  Used to key per-arc random draws.
  std::int64_t arc_begin(NodeId u) const { return row_offsets_[u]; }

  double degree(NodeId u) const { return degrees_[u]; }
  const std::vector<double>& degrees() const { return degrees_; }

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  NodeId n_ = 0;
  std::vector<std::int64_t> row_offsets_;  // size n+1
  std::vector<NodeId> col_indices_;        // size = num arcs
  std::vector<double> edge_weights_;       // parallel to col_indices_
  std::vector<double> degrees_;            // weighted degree per node
};

enum class PropagationKind {
  RowStochastic,        // D^-1 W
  SymmetricNormalized,  // D^-1/2 W D^-1/2
};

// Returns M * Y where M is the operator selected by `kind`.  Rows of
// isolated nodes come out all-zero.  Parallelizes over output rows; the
// result is identical for every thread count (per-row accumulation runs in
// fixed neighbor order).
DenseMatrix propagate(const CsrGraph& g, PropagationKind kind,
                      const DenseMatrix& y, unsigned threads = 1);

// --- edge-list file format ----------------------------------------------
// UTF-8 text; one edge per line as "u<TAB>v" with 0-based decimal node ids;
// lines starting with '#' are comments.  Node count is 1 + max id unless a
// larger override is supplied.

struct EdgeList {
  std::vector<Edge> edges;
  NodeId n = 0;  // inferred 1 + max id (0 for an empty list)
};

EdgeList read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, std::span<const Edge> edges);

}  // namespace graphssl
