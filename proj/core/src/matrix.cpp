#include "mctk/matrix.hpp"

#include <cassert>
#include <cmath>

namespace mctk {

std::vector<double> mat_vec(const Matrix& m, std::span<const double> f) {
  assert(m.cols() == f.size());
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * f[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> vec_mat(std::span<const double> mu, const Matrix& m) {
  assert(m.rows() == mu.size());
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double w = mu[i];
    if (w == 0.0) continue;
    auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += w * row[j];
  }
  return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Matrix out(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double w = a(i, k);
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += w * b(k, j);
    }
  }
  return out;
}

bool solve_linear(Matrix a, std::vector<double> b, std::vector<double>& x,
                  double pivot_tol) {
  const std::size_t n = a.rows();
  assert(a.cols() == n && b.size() == n);
  // Scale threshold by the largest entry so degeneracy detection is
  // insensitive to the overall magnitude of the system.
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return false;
  const double threshold = pivot_tol * scale;

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_abs = std::fabs(a(perm[col], col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(a(perm[r], col));
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (best_abs <= threshold) return false;
    std::swap(perm[col], perm[best]);
    const std::size_t p = perm[col];
    const double pivot = a(p, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::size_t q = perm[r];
      const double factor = a(q, col) / pivot;
      if (factor == 0.0) continue;
      a(q, col) = 0.0;
      for (std::size_t c = col + 1; c < n; ++c) a(q, c) -= factor * a(p, c);
      b[q] -= factor * b[p];
    }
  }

  x.assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    const std::size_t p = perm[ri];
    double acc = b[p];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= a(p, c) * x[c];
    x[ri] = acc / a(p, ri);
  }
  return true;
}

}  // namespace mctk
