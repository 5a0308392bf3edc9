#pragma once

// Small dense matrices over complex or dual scalars.  Sizes are tiny (<= 8),
// so everything is row-major std::vector with plain loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "algebroid/dual.hpp"
#include "algebroid/errors.hpp"

namespace algebroid {

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(Complex{})) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(Complex{1.0, 0.0});
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
    Matrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) = p(i, j) + a(i, k) * b(k, j);
    return p;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix s = a;
    for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] = s.data_[i] + b.data_[i];
    return s;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix s = a;
    for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] = s.data_[i] - b.data_[i];
    return s;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

using CMatrix = Matrix<Complex>;
using CVector = std::vector<Complex>;

inline CMatrix conj(const CMatrix& a) {
  CMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = std::conj(a(i, j));
  return c;
}

inline CMatrix adjoint(const CMatrix& a) { return conj(a).transpose(); }

inline double max_abs(const CMatrix& a) {
  double m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

inline double max_abs(const CVector& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Determinant and inverse by Gauss-Jordan with partial pivoting (on the
/// complex value of each entry).  Throws E when |pivot product| < tol.
template <class E = SingularMatrix, class S>
Matrix<S> inverse(const Matrix<S>& a, double tol = 1e-12) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("inverse of a non-square matrix");
  Matrix<S> w = a;
  Matrix<S> inv = Matrix<S>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(value_of(w(col, col)));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(value_of(w(r, col)));
      if (v > best) best = v, piv = r;
    }
    if (best < tol) throw E("matrix is singular (pivot " + std::to_string(best) + ")");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(w(col, c), w(piv, c));
        std::swap(inv(col, c), inv(piv, c));
      }
    }
    const S p = w(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      w(col, c) = w(col, c) / p;
      inv(col, c) = inv(col, c) / p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = w(r, col);
      if (is_exact_zero(f)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        w(r, c) = w(r, c) - f * w(col, c);
        inv(r, c) = inv(r, c) - f * inv(col, c);
      }
    }
  }
  return inv;
}

inline Complex determinant(const CMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("determinant of a non-square matrix");
  CMatrix w = a;
  Complex det{1.0, 0.0};
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(w(r, col)) > std::abs(w(piv, col))) piv = r;
    if (w(piv, col) == Complex{}) return Complex{};
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(w(col, c), w(piv, c));
      det = -det;
    }
    det *= w(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = w(r, col) / w(col, col);
      for (std::size_t c = col; c < n; ++c) w(r, c) -= f * w(col, c);
    }
  }
  return det;
}

/// Rank by column-pivoted elimination; pivots below tol count as zero.
inline int rank(const CMatrix& a, double tol = 1e-10) {
  CMatrix w = a;
  const std::size_t rows = w.rows();
  const std::size_t cols = w.cols();
  int r = 0;
  std::vector<bool> used(cols, false);
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    double best = 0;
    std::size_t br = 0;
    std::size_t bc = 0;
    for (std::size_t i = static_cast<std::size_t>(r); i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (!used[j] && std::abs(w(i, j)) > best) best = std::abs(w(i, j)), br = i, bc = j;
    if (best < tol) break;
    used[bc] = true;
    const std::size_t pr = static_cast<std::size_t>(r);
    for (std::size_t c = 0; c < cols; ++c) std::swap(w(pr, c), w(br, c));
    for (std::size_t i = pr + 1; i < rows; ++i) {
      const Complex f = w(i, bc) / w(pr, bc);
      for (std::size_t c = 0; c < cols; ++c) w(i, c) -= f * w(pr, c);
    }
    ++r;
  }
  return r;
}

/// Hermitian positive-definiteness by attempting a Cholesky factorization.
inline bool is_positive_definite(const CMatrix& g, double tol = 1e-14) {
  const std::size_t n = g.rows();
  CMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex s = g(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * std::conj(l(j, k));
    if (s.real() <= tol) return false;
    l(j, j) = std::sqrt(s.real());
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex t = g(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= l(i, k) * std::conj(l(j, k));
      l(i, j) = t / l(j, j);
    }
  }
  return true;
}

/// 1-norm condition estimate via the explicit inverse.
inline double condition_number(const CMatrix& a, const CMatrix& inv) {
  auto norm1 = [](const CMatrix& m) {
    double best = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0;
      for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
      best = std::max(best, s);
    }
    return best;
  };
  return norm1(a) * norm1(inv);
}

inline CVector operator*(const CMatrix& a, const CVector& v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

}  // namespace algebroid
