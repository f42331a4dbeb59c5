#include "graphssl/csr_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "graphssl/parallel.hpp"

namespace graphssl {

CsrGraph CsrGraph::from_edges(std::span<const Edge> edges, NodeId n) {
  if (n < 0) throw std::invalid_argument("from_edges: negative node count");
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw std::invalid_argument("from_edges: node id out of range [0, " +
                                  std::to_string(n) + "): (" +
                                  std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
    }
    if (e.u == e.v) {
      throw std::invalid_argument("from_edges: self-loop at node " +
                                  std::to_string(e.u));
    }
  }

  // Count arcs per row, prefix-sum, scatter, then sort + dedupe each row.
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) {
    ++counts[e.u + 1];
    ++counts[e.v + 1];
  }
  for (NodeId u = 0; u < n; ++u) counts[u + 1] += counts[u];

  std::vector<NodeId> cols(edges.size() * 2);
  std::vector<std::int64_t> cursor(counts.begin(), counts.end() - 1);
  for (const Edge& e : edges) {
    cols[cursor[e.u]++] = e.v;
    cols[cursor[e.v]++] = e.u;
  }

  CsrGraph g;
  g.n_ = n;
  g.row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.col_indices_.reserve(cols.size());
  for (NodeId u = 0; u < n; ++u) {
    const auto first = cols.begin() + counts[u];
    const auto last = cols.begin() + counts[u + 1];
    std::sort(first, last);
    const auto unique_end = std::unique(first, last);
    for (auto it = first; it != unique_end; ++it) g.col_indices_.push_back(*it);
    g.row_offsets_[u + 1] = static_cast<std::int64_t>(g.col_indices_.size());
  }
  g.edge_weights_.assign(g.col_indices_.size(), 1.0);
  g.degrees_.assign(static_cast<std::size_t>(n), 0.0);
  for (NodeId u = 0; u < n; ++u) {
    double d = 0.0;
    for (double w : g.arc_weights(u)) d += w;
    g.degrees_[u] = d;
  }
  return g;
}

DenseMatrix propagate(const CsrGraph& g, PropagationKind kind,
                      const DenseMatrix& y, unsigned threads) {
  const NodeId n = g.num_nodes();
  if (y.rows() != n) {
    throw std::invalid_argument("propagate: Y has " + std::to_string(y.rows()) +
                                " rows, graph has " + std::to_string(n) +
                                " nodes");
  }
  const std::int64_t l = y.cols();
  DenseMatrix out(n, l, 0.0);

  parallel_blocks(n, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t u = begin; u < end; ++u) {
      const double du = g.degree(static_cast<NodeId>(u));
      if (du <= 0.0) continue;  // isolated: all-zero output row
      const auto nbrs = g.neighbors(static_cast<NodeId>(u));
      const auto wts = g.arc_weights(static_cast<NodeId>(u));
      auto out_row = out.row(u);
      if (kind == PropagationKind::RowStochastic) {
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
          const double w = wts[k];
          const auto in_row = y.row(nbrs[k]);
          for (std::int64_t j = 0; j < l; ++j) out_row[j] += w * in_row[j];
        }
        const double inv = 1.0 / du;
        for (std::int64_t j = 0; j < l; ++j) out_row[j] *= inv;
      } else {
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
          const NodeId v = nbrs[k];
          const double dv = g.degree(v);
          if (dv <= 0.0) continue;  // unreachable: arc implies dv >= w > 0
          const double coef = wts[k] / std::sqrt(du * dv);
          const auto in_row = y.row(v);
          for (std::int64_t j = 0; j < l; ++j) out_row[j] += coef * in_row[j];
        }
      }
    }
  });
  return out;
}

EdgeList read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  EdgeList result;
  NodeId max_id = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'u<TAB>v'");
    }
    Edge e{};
    try {
      e.u = static_cast<NodeId>(std::stol(line.substr(0, tab)));
      e.v = static_cast<NodeId>(std::stol(line.substr(tab + 1)));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed node id");
    }
    if (e.u < 0 || e.v < 0) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": negative node id");
    }
    max_id = std::max({max_id, e.u, e.v});
    result.edges.push_back(e);
  }
  result.n = max_id + 1;
  return result;
}

void write_edge_list(const std::string& path, std::span<const Edge> edges) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (const Edge& e : edges) {
    out << e.u << '\t' << e.v << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace graphssl
