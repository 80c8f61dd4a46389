#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netcent/error.hpp"

namespace netcent::linalg {

/// Dense row-major real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ContractError("multiply: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

inline constexpr double kPivotTolerance = 1e-12;

/**
 * Solves a * X = rhs by Gaussian elimination with partial pivoting.
 *
 * Throws SingularMatrixError when the largest available pivot in some column
 * has magnitude below kPivotTolerance.
 */
inline DenseMatrix solve_linear(DenseMatrix a, DenseMatrix rhs) {
  if (!a.square()) throw ContractError("solve_linear: matrix is not square");
  if (rhs.rows() != a.rows()) throw ContractError("solve_linear: rhs row count mismatch");
  const std::size_t n = a.rows();
  const std::size_t m = rhs.cols();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) < kPivotTolerance) {
      throw SingularMatrixError("solve_linear: singular matrix (pivot column " + std::to_string(col) + ")");
    }
    if (pivot != col) {
      std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(pivot).begin());
      std::swap_ranges(rhs.row(col).begin(), rhs.row(col).end(), rhs.row(pivot).begin());
    }
    const double inv = 1.0 / a(col, col);
    const auto prow = a.row(col);
    const auto prhs = rhs.row(col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) * inv;
      if (factor == 0.0) continue;
      auto row = a.row(r);
      for (std::size_t j = col; j < n; ++j) row[j] -= factor * prow[j];
      auto rrow = rhs.row(r);
      for (std::size_t j = 0; j < m; ++j) rrow[j] -= factor * prhs[j];
    }
  }

  // Back substitution, row by row so the inner loops stay contiguous.
  for (std::size_t i = n; i-- > 0;) {
    auto xi = rhs.row(i);
    const auto arow = a.row(i);
    for (std::size_t k = i + 1; k < n; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const auto xk = rhs.row(k);
      for (std::size_t j = 0; j < m; ++j) xi[j] -= aik * xk[j];
    }
    const double inv = 1.0 / arow[i];
    for (std::size_t j = 0; j < m; ++j) xi[j] *= inv;
  }
  return rhs;
}

inline DenseMatrix inverse(const DenseMatrix& a) { return solve_linear(a, DenseMatrix::identity(a.rows())); }

struct EigenDecomposition {
  std::vector<double> values;  // non-decreasing
  DenseMatrix vectors;         // column j pairs with values[j]
};

struct JacobiOptions {
  // Sweeps stop once the off-diagonal Frobenius norm is at most
  // off_tolerance * max(1, ||A||_F).
  double off_tolerance = 1e-12;
  int max_sweeps = 100;
  double symmetry_tolerance = 1e-12;
};

/**
 * Symmetric eigendecomposition by cyclic Jacobi rotations.
 *
 * Rows p and q are rotated in place and mirrored into columns, so the working
 * matrix stays symmetric. Eigenvectors are accumulated as rows of V^T, which
 * keeps every update contiguous, and transposed once at the end.
 */
inline EigenDecomposition sym_eigen(const DenseMatrix& input, const JacobiOptions& opts = {}) {
  if (!input.square()) throw ContractError("sym_eigen: matrix is not square");
  const std::size_t n = input.rows();
  const double scale = std::max(1.0, max_abs(input));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > opts.symmetry_tolerance * scale)
        throw ContractError("sym_eigen: matrix is not symmetric");

  DenseMatrix a = input;
  DenseMatrix vt = DenseMatrix::identity(n);

  double frob = 0.0;
  for (double x : a.data()) frob += x * x;
  const double threshold = opts.off_tolerance * std::max(1.0, std::sqrt(frob));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  bool converged = off_norm() <= threshold;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = rp[k];
          const double y = rq[k];
          rp[k] = c * x - s * y;
          rq[k] = s * x + c * y;
        }
        rp[p] = app - t * apq;
        rq[q] = aqq + t * apq;
        rp[q] = rq[p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a(k, p) = rp[k];
          a(k, q) = rq[k];
        }

        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vp[k];
          const double y = vq[k];
          vp[k] = c * x - s * y;
          vq[k] = s * x + c * y;
        }
      }
    }
    converged = off_norm() <= threshold;
  }
  if (!converged) throw ConvergenceError("sym_eigen: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });

  EigenDecomposition out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    const auto v = vt.row(order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v[i];
  }
  return out;
}

}  // namespace netcent::linalg
