#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mctk {

// Dense row-major matrix of doubles. Small-state-space workhorse: kernels,
// metrics, couplings, conductance tables.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_.data() + i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_.data() + i * cols_, cols_);
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = M f (action on column vectors / functions).
std::vector<double> mat_vec(const Matrix& m, std::span<const double> f);

// y = mu M (action on row vectors / measures).
std::vector<double> vec_mat(std::span<const double> mu, const Matrix& m);

Matrix mat_mul(const Matrix& a, const Matrix& b);

// Solves A x = b by Gaussian elimination with partial pivoting.
// Returns false when a pivot falls below the degeneracy threshold.
bool solve_linear(Matrix a, std::vector<double> b, std::vector<double>& x,
                  double pivot_tol = 1e-12);

}  // namespace mctk
