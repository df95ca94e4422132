#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace divopt {

// Dense rows x cols matrix of doubles in column-major (structure-of-arrays)
// order: column k is contiguous. Populations store particles as rows and
// coordinates as columns, so the pairwise kernels stream whole coordinate
// columns.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t k) { return data_[k * rows_ + i]; }
  double operator()(std::size_t i, std::size_t k) const { return data_[k * rows_ + i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<double> col(std::size_t k) { return {data_.data() + k * rows_, rows_}; }
  std::span<const double> col(std::size_t k) const {
    return {data_.data() + k * rows_, rows_};
  }

  void row(std::size_t i, std::span<double> out) const {
    for (std::size_t k = 0; k < cols_; ++k) out[k] = (*this)(i, k);
  }
  void set_row(std::size_t i, std::span<const double> in) {
    for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = in[k];
  }
  std::vector<double> row(std::size_t i) const {
    std::vector<double> out(cols_);
    row(i, out);
    return out;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace divopt
