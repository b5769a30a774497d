#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "semgeo/util/parallel.hpp"

namespace semgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Flips each column so that its largest-magnitude entry is positive.
/// Ties go to the lowest row index.
inline void canonicalize_signs(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (vectors.rows() > 0 && vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // column j pairs with values(j)
};

/// Full eigendecomposition of a symmetric matrix, eigenvalues descending,
/// eigenvector signs canonicalized.
inline SymmetricEigen eigen_descending(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigen_descending: matrix not square");
  SymmetricEigen out;
  if (a.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_descending: solver failed");
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  canonicalize_signs(out.vectors);
  return out;
}

/// Same as eigen_descending but ascending order.
inline SymmetricEigen eigen_ascending(const Matrix& a) {
  SymmetricEigen out;
  if (a.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_ascending: solver failed");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  canonicalize_signs(out.vectors);
  return out;
}

/// a * b with rows computed in fixed-size chunks; output is independent of
/// the worker count.
inline Matrix multiply(const Matrix& a, const Matrix& b, const Execution& ex = {}) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  Matrix c(a.rows(), b.cols());
  parallel_for_rows(static_cast<std::size_t>(a.rows()), ex, [&](std::size_t begin, std::size_t end) {
    const auto len = static_cast<Eigen::Index>(end - begin);
    const auto start = static_cast<Eigen::Index>(begin);
    c.middleRows(start, len).noalias() = a.middleRows(start, len) * b;
  });
  return c;
}

/// Double centering J * a * J with J = I - 11ᵀ/n.
inline Matrix double_center(const Matrix& a) {
  const Vector row_mean = a.rowwise().mean();
  const Vector col_mean = a.colwise().mean().transpose();
  const double grand = a.mean();
  Matrix out = a;
  out.colwise() -= row_mean;
  out.rowwise() -= col_mean.transpose();
  out.array() += grand;
  return out;
}

inline Matrix center_columns(const Matrix& x) {
  Matrix out = x;
  if (x.rows() > 0) out.rowwise() -= x.colwise().mean();
  return out;
}

/// Sample covariance (divides by n, not n - 1; callers only use ratios).
inline Matrix covariance(const Matrix& x) {
  const Matrix centered = center_columns(x);
  if (x.rows() == 0) return Matrix::Zero(x.cols(), x.cols());
  return (centered.transpose() * centered) / static_cast<double>(x.rows());
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace semgeo
