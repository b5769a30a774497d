#pragma once

#include <cmath>

#include "semgeo/phate/stages.hpp"
#include "semgeo/projection.hpp"
#include "semgeo/util/linalg.hpp"

namespace semgeo {

inline void check_out_dims(int out_dims, const char* who) {
  if (out_dims != 2 && out_dims != 3) {
    throw GeometryError(GeometryError::Kind::InvalidParameter, std::string(who) + ": out_dims must be 2 or 3");
  }
}

/// Scores of the mean-centered data on the top covariance eigenvectors.
/// Each component's largest-magnitude score is positive.
inline Projection pca(const Matrix& x, int out_dims) {
  check_out_dims(out_dims, "pca");
  if (x.rows() < 2) throw GeometryError(GeometryError::Kind::InvalidParameter, "pca: needs at least 2 rows");
  if (!x.allFinite()) throw GeometryError(GeometryError::Kind::NonFiniteInput, "pca: non-finite input");
  const Matrix centered = center_columns(x);
  const SymmetricEigen eig = eigen_descending(covariance(x));
  const Eigen::Index keep = std::min<Eigen::Index>(out_dims, x.cols());
  Projection p;
  p.coords = Matrix::Zero(x.rows(), out_dims);
  p.coords.leftCols(keep) = centered * eig.vectors.leftCols(keep);
  canonicalize_signs(p.coords);
  p.method = "pca";
  p.params = {{"dims", out_dims}};
  p.item_ids = index_ids(x.rows());
  double total = eig.values.sum();
  for (Eigen::Index c = 0; c < keep; ++c) {
    p.metadata["explained_variance_" + std::to_string(c + 1)] = total > 0.0 ? eig.values(c) / total : 0.0;
  }
  return p;
}

/// Kernel PCA with an RBF kernel exp(−γ‖x_i − x_j‖²), or the plain inner
/// product when `linear`. Scores are the centered-kernel eigenvectors
/// scaled by sqrt(eigenvalue), i.e. K_c·α/sqrt(λ).
inline Projection kernel_pca(const Matrix& x, int out_dims, double gamma, bool linear = false, const Execution& ex = {}) {
  check_out_dims(out_dims, "kpca");
  if (!linear && !(gamma > 0.0)) throw GeometryError(GeometryError::Kind::InvalidParameter, "kpca: gamma must be positive");
  if (x.rows() < 2) throw GeometryError(GeometryError::Kind::InvalidParameter, "kpca: needs at least 2 rows");
  const Eigen::Index n = x.rows();
  Matrix k;
  if (linear) {
    if (!x.allFinite()) throw GeometryError(GeometryError::Kind::NonFiniteInput, "kpca: non-finite input");
    k = x * x.transpose();
  } else {
    const DistanceMatrix d = pairwise_distances(x, ex);
    k = (-gamma * d.values.array().square()).exp().matrix();
  }
  const Matrix centered = double_center(k);
  const SymmetricEigen eig = eigen_descending(0.5 * (centered + centered.transpose()));
  if (!(eig.values(0) > 1e-12)) {
    throw GeometryError(GeometryError::Kind::DegenerateKernel, "kpca: centered kernel has no positive eigenvalue above 1e-12");
  }
  Projection p;
  p.coords = Matrix::Zero(n, out_dims);
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(out_dims, n); ++c) {
    if (eig.values(c) > 1e-12) p.coords.col(c) = eig.vectors.col(c) * std::sqrt(eig.values(c));
  }
  p.method = "kpca";
  p.params = {{"dims", out_dims}, {"gamma", gamma}, {"linear", linear ? 1.0 : 0.0}};
  p.item_ids = index_ids(n);
  return p;
}

}  // namespace semgeo
