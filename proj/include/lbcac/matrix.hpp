#pragma once

#include <vector>

namespace lbcac {

// Minimal dense row-major matrix. All toolkit matrices are small (n x n
// with n in the tens), so no effort is spent on layout tricks.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
              fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool square() const { return rows_ == cols_; }

  T& operator()(int r, int c) { return data_[idx(r, c)]; }
  const T& operator()(int r, int c) const { return data_[idx(r, c)]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

}  // namespace lbcac
