#pragma once

// Seed assignments, predictions, and label-file I/O shared by all learners.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "graphssl/csr_graph.hpp"
#include "graphssl/dense_matrix.hpp"

namespace graphssl {

// The labeled set S: node ids with their class labels.  Kept sorted by node
// id (construction normalizes) so that iteration order, and everything
// derived from it, is deterministic.
struct SeedAssignment {
  std::vector<NodeId> ids;          // sorted ascending, unique
  std::vector<std::int32_t> labels; // parallel to ids, each in [0, num_classes)
  std::int32_t num_classes = 0;

  std::size_t size() const { return ids.size(); }

  // Normalizes (sorts by id) and validates: distinct ids, labels in range.
  static SeedAssignment make(std::vector<NodeId> ids,
                             std::vector<std::int32_t> labels,
                             std::int32_t num_classes);

  // Membership bitmap over [0, n).
  std::vector<char> mask(NodeId n) const;

  // Class histogram, size num_classes.
  std::vector<std::int64_t> class_counts() const;
};

struct Prediction {
  NodeId node = 0;
  std::int32_t label = 0;
  double margin = 0.0;  // gap between the two largest class scores

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

inline constexpr double kSingleClassMargin =
    std::numeric_limits<double>::infinity();

// Argmax with lowest-index tie-break + top-two gap for one score row.
Prediction predict_row(std::span<const double> row, NodeId node);

// Predictions for every non-seed node (ascending node id), one per row of Y.
std::vector<Prediction> extract_predictions(const SoftLabelMatrix& y,
                                            const SeedAssignment& seeds);

// --- label file format ----------------------------------------------------
// UTF-8 text; one "node<TAB>class" pair per line, 0-based decimal integers;
// '#' lines are comments.  Every node in [0, n) must appear exactly once
// when a full labeling is required (generator output / ground truth).

std::vector<std::int32_t> read_labels(const std::string& path, NodeId n);
void write_labels(const std::string& path,
                  std::span<const std::int32_t> labels);

}  // namespace graphssl
