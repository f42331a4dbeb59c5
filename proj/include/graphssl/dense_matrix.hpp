#pragma once

// Row-major dense matrix of doubles.  Used for soft-label matrices (n x L)
// and diffused feature matrices (n x d).  Deliberately minimal: storage,
// row views, and the couple of reductions the tests need.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace graphssl {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::int64_t rows, std::int64_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
      throw std::invalid_argument("DenseMatrix: negative dimension");
    }
    values_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

  double& operator()(std::int64_t i, std::int64_t j) {
    return values_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(std::int64_t i, std::int64_t j) const {
    return values_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::span<double> row(std::int64_t i) {
    return {values_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<const double> row(std::int64_t i) const {
    return {values_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  void fill(double v) { std::fill(values_.begin(), values_.end(), v); }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

  // max_ij |a_ij - b_ij|; shapes must match.
  static double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) {
      throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.values_.size(); ++k) {
      m = std::max(m, std::abs(a.values_[k] - b.values_[k]));
    }
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<double> values_;
};

// Soft labels are just a dense n x L matrix; the alias documents intent.
using SoftLabelMatrix = DenseMatrix;

}  // namespace graphssl
