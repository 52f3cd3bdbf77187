#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace entsa {

// Dense row-major matrix; rows are sample points.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  [[nodiscard]] std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
    return out;
  }

  /// Copy of this matrix without column `skip`.
  [[nodiscard]] Matrix without_column(std::size_t skip) const {
    Matrix out(rows_, cols_ - 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::size_t k = 0;
      for (std::size_t c = 0; c < cols_; ++c)
        if (c != skip) out(r, k++) = (*this)(r, c);
    }
    return out;
  }

  [[nodiscard]] Matrix select_rows(std::span<const std::size_t> keep) const {
    Matrix out(keep.size(), cols_);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      auto src = row(keep[i]);
      std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
  }

  std::span<double> data() { return data_; }
  [[nodiscard]] std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace entsa
