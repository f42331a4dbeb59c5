#include "graphssl/labels.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace graphssl {

SeedAssignment SeedAssignment::make(std::vector<NodeId> ids,
                                    std::vector<std::int32_t> labels,
                                    std::int32_t num_classes) {
  if (ids.size() != labels.size()) {
    throw std::invalid_argument("SeedAssignment: ids/labels size mismatch");
  }
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  SeedAssignment s;
  s.num_classes = num_classes;
  s.ids.reserve(ids.size());
  s.labels.reserve(ids.size());
  for (std::size_t k : order) {
    if (!s.ids.empty() && s.ids.back() == ids[k]) {
      throw std::invalid_argument("SeedAssignment: duplicate seed id " +
                                  std::to_string(ids[k]));
    }
    if (labels[k] < 0 || labels[k] >= num_classes) {
      throw std::invalid_argument("SeedAssignment: label " +
                                  std::to_string(labels[k]) +
                                  " out of range [0, " +
                                  std::to_string(num_classes) + ")");
    }
    s.ids.push_back(ids[k]);
    s.labels.push_back(labels[k]);
  }
  return s;
}

std::vector<char> SeedAssignment::mask(NodeId n) const {
  std::vector<char> m(static_cast<std::size_t>(n), 0);
  for (NodeId id : ids) {
    if (id < 0 || id >= n) {
      throw std::invalid_argument("SeedAssignment: seed id " +
                                  std::to_string(id) + " outside [0, " +
                                  std::to_string(n) + ")");
    }
    m[id] = 1;
  }
  return m;
}

std::vector<std::int64_t> SeedAssignment::class_counts() const {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (std::int32_t c : labels) ++counts[c];
  return counts;
}

Prediction predict_row(std::span<const double> row, NodeId node) {
  if (row.empty()) throw std::invalid_argument("predict_row: empty row");
  if (row.size() == 1) return {node, 0, kSingleClassMargin};
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;  // strict: ties keep lowest index
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j != best) second = std::max(second, row[j]);
  }
  return {node, static_cast<std::int32_t>(best), row[best] - second};
}

std::vector<Prediction> extract_predictions(const SoftLabelMatrix& y,
                                            const SeedAssignment& seeds) {
  const NodeId n = static_cast<NodeId>(y.rows());
  const std::vector<char> is_seed = seeds.mask(n);
  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(n) - seeds.size());
  for (NodeId i = 0; i < n; ++i) {
    if (is_seed[i]) continue;
    out.push_back(predict_row(y.row(i), i));
  }
  return out;
}

std::vector<std::int32_t> read_labels(const std::string& path, NodeId n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels: " + path);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n), -1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'node<TAB>class'");
    }
    long node = 0, cls = 0;
    try {
      node = std::stol(line.substr(0, tab));
      cls = std::stol(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed integer");
    }
    if (node < 0 || node >= n) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": node id out of range");
    }
    if (labels[node] != -1) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": duplicate label for node " +
                               std::to_string(node));
    }
    if (cls < 0) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": negative class");
    }
    labels[node] = static_cast<std::int32_t>(cls);
  }
  for (NodeId i = 0; i < n; ++i) {
    if (labels[i] == -1) {
      throw std::runtime_error(path + ": missing label for node " +
                               std::to_string(i));
    }
  }
  return labels;
}

void write_labels(const std::string& path,
                  std::span<const std::int32_t> labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labels: " + path);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << '\t' << labels[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace graphssl
