#pragma once

// Small dense matrices and a cyclic Jacobi eigensolver for real symmetric
// input. Sized for desk-scale verification (a few thousand rows at most).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "etlab/errors.hpp"

namespace etlab {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  /// Conjugate transpose (plain transpose for real T).
  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<T, std::complex<double>>)
          out(j, i) = std::conj((*this)(i, j));
        else
          out(j, i) = (*this)(i, j);
      }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const T ail = a(i, l);
        if (ail == T{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += ail * b(l, j);
      }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<std::complex<double>>;

/// Kronecker product, used as an explicit cross-check of implicit tensor powers.
template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) out(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return out;
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

struct JacobiOptions {
  double tolerance = 1e-10;
  int max_sweeps = 100;
};

struct EigenDecomposition {
  std::vector<double> values;     // ascending
  RealMatrix vectors;             // column i pairs with values[i]
  std::vector<double> residuals;  // ||N v - lambda v||_2 per eigenpair
  int sweeps = 0;

  double max_residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  }
};

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
/// Throws HypothesisError when the input is not symmetric within the tolerance
/// and ConvergenceError when the off-diagonal mass does not vanish in time.
inline EigenDecomposition jacobi_eigen(const RealMatrix& input, JacobiOptions opts = {}) {
  if (!input.square()) throw DimensionError("jacobi_eigen: matrix is not square");
  const std::size_t n = input.rows();

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(input(i, j)));
  const double sym_tol = opts.tolerance * std::max(1.0, scale);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > sym_tol)
        throw HypothesisError("jacobi_eigen: matrix not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");

  RealMatrix a = input;
  RealMatrix v = RealMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };
  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  frob = std::sqrt(frob);
  // Converge well below the caller's tolerance; the residual check reports
  // what was actually achieved.
  const double target = std::max(frob, 1.0) * 1e-15 * static_cast<double>(std::max<std::size_t>(n, 1));

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep >= opts.max_sweeps)
      throw ConvergenceError("jacobi_eigen: no convergence after " + std::to_string(opts.max_sweeps) + " sweeps");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = RealMatrix(n, n);
  out.residuals.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = a(src, src);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = v(i, src);
  }
  for (std::size_t c = 0; c < n; ++c) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += input(i, j) * out.vectors(j, c);
      const double diff = row - out.values[c] * out.vectors(i, c);
      r2 += diff * diff;
    }
    out.residuals[c] = std::sqrt(r2);
  }
  return out;
}

/// Eigenvalues (ascending) of a Hermitian matrix, through the real symmetric
/// embedding [[Re H, -Im H], [Im H, Re H]] whose spectrum doubles that of H.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, JacobiOptions opts = {}) {
  if (!h.square()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  const std::size_t n = h.rows();
  RealMatrix embed(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      embed(i, j) = h(i, j).real();
      embed(i + n, j + n) = h(i, j).real();
      embed(i, j + n) = -h(i, j).imag();
      embed(i + n, j) = h(i, j).imag();
    }
  auto eig = jacobi_eigen(embed, opts);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < 2 * n; i += 2) out.push_back(0.5 * (eig.values[i] + eig.values[i + 1]));
  return out;
}

/// Singular values (descending) of a complex matrix: square roots of the
/// eigenvalues of A*A.
inline std::vector<double> singular_values(const ComplexMatrix& a, JacobiOptions opts = {}) {
  auto gram = a.adjoint() * a;
  auto eig = hermitian_eigenvalues(gram, opts);
  std::vector<double> out;
  out.reserve(eig.size());
  for (auto it = eig.rbegin(); it != eig.rend(); ++it) out.push_back(std::sqrt(std::max(0.0, *it)));
  return out;
}

}  // namespace etlab
