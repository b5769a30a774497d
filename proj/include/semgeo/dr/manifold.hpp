#pragma once

#include <Eigen/SVD>

#include <cmath>

#include "semgeo/dr/graph.hpp"
#include "semgeo/dr/linear.hpp"
#include "semgeo/phate/mds.hpp"
#include "semgeo/phate/stages.hpp"
#include "semgeo/projection.hpp"

namespace semgeo {

// ---------------------------------------------------------------- isomap

/// Classical MDS on shortest-path distances of the symmetrized k-NN graph.
inline Projection isomap(const Matrix& x, int out_dims, int k, const Execution& ex = {}) {
  check_out_dims(out_dims, "isomap");
  const DistanceMatrix d = pairwise_distances(x, ex);
  const Matrix graph = knn_graph(d, k, false);
  std::size_t components = 0;
  connected_components(graph, &components);
  if (components > 1) {
    throw GeometryError(GeometryError::Kind::DisconnectedGraph,
                        "isomap: k-NN graph has " + std::to_string(components) + " components; increase k", components);
  }
  ClassicalMdsResult r = classical_mds_coords(shortest_paths(graph, ex), out_dims);
  Projection p;
  p.coords = std::move(r.coords);
  p.method = "isomap";
  p.params = {{"dims", out_dims}, {"k", k}};
  p.item_ids = index_ids(x.rows());
  p.metadata = {{"negative_eigenvalues", static_cast<double>(r.negative_eigenvalues)}};
  return p;
}

// ------------------------------------------------------------------- lle

inline constexpr double kLleRegularization = 1e-3;

/// Reconstruction weights, one row per point, each summing to 1.
///
/// Weights minimize ‖x_i − Σ w_j x_j‖ over the k nearest neighbours with
/// the local Gram matrix regularized by 1e-3·trace. When the neighbourhood
/// is affinely degenerate (fewer independent directions than neighbours,
/// e.g. k > intrinsic dimension) the zero-regularization limit is used
/// instead: the minimum-norm weights that reconstruct x_i exactly.
inline Matrix lle_weights(const Matrix& x, const DistanceMatrix& dist, int k) {
  const Eigen::Index n = x.rows();
  const auto nbrs = knn_indices(dist, k);
  Matrix w = Matrix::Zero(n, n);
  const Vector ones = Vector::Ones(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& nb = nbrs[static_cast<std::size_t>(i)];
    Matrix z(k, x.cols());
    for (int a = 0; a < k; ++a) z.row(a) = x.row(nb[static_cast<std::size_t>(a)]) - x.row(i);
    const Matrix g = z * z.transpose();
    const double trace = g.trace();
    Vector wi;
    if (!(trace > 0.0)) {
      wi = ones / static_cast<double>(k);
    } else {
      Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU);
      const Vector& s = svd.singularValues();
      Eigen::Index rank = 0;
      while (rank < s.size() && s(rank) > 1e-9 * s(0)) ++rank;
      bool exact = false;
      if (rank < k) {
        const Matrix null = svd.matrixU().rightCols(k - rank);
        const Vector v = null * (null.transpose() * ones);
        const double total = v.sum();
        if (std::abs(total) > 1e-9) {
          wi = v / total;
          exact = true;
        }
      }
      if (!exact) {
        const Matrix reg = g + kLleRegularization * trace * Matrix::Identity(k, k);
        wi = reg.ldlt().solve(ones);
        wi /= wi.sum();
      }
    }
    for (int a = 0; a < k; ++a) w(i, nb[static_cast<std::size_t>(a)]) = wi(a);
  }
  return w;
}

/// Locally linear embedding: bottom non-trivial eigenvectors of (I−W)ᵀ(I−W).
inline Projection lle(const Matrix& x, int out_dims, int k, const Execution& ex = {}) {
  check_out_dims(out_dims, "lle");
  const Eigen::Index n = x.rows();
  if (k < 1) throw GeometryError(GeometryError::Kind::InvalidParameter, "lle: k must be >= 1");
  if (n <= k) {
    throw GeometryError(GeometryError::Kind::KTooLarge, "lle: k=" + std::to_string(k) + " needs more than k points, have " + std::to_string(n));
  }
  if (n < out_dims + 2) throw GeometryError(GeometryError::Kind::InvalidParameter, "lle: too few points for the requested dims");
  const DistanceMatrix d = pairwise_distances(x, ex);
  const Matrix w = lle_weights(x, d, k);
  const Matrix iw = Matrix::Identity(n, n) - w;
  const Matrix m = multiply(iw.transpose(), iw, ex);
  const SymmetricEigen eig = eigen_ascending(0.5 * (m + m.transpose()));
  Projection p;
  p.coords = eig.vectors.middleCols(1, out_dims);
  p.method = "lle";
  p.params = {{"dims", out_dims}, {"k", k}, {"reg", kLleRegularization}};
  p.item_ids = index_ids(n);
  p.metadata = {{"bottom_eigenvalue", eig.values(0)}};
  return p;
}

// -------------------------------------------------------------- spectral

/// Unnormalized Laplacian D − A.
inline Matrix laplacian(const Matrix& adjacency) {
  Matrix l = -adjacency;
  l.diagonal() += adjacency.rowwise().sum();
  return l;
}

/// Symmetric normalized Laplacian I − D^{-1/2}·A·D^{-1/2}. Isolated nodes
/// get an identity row.
inline Matrix normalized_laplacian(const Matrix& adjacency) {
  const Vector deg = adjacency.rowwise().sum();
  const Vector inv_sqrt = deg.unaryExpr([](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; });
  Matrix l = -(inv_sqrt.asDiagonal() * adjacency * inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

struct SpectralResult {
  Matrix coords;
  Vector eigenvalues;  // of the normalized Laplacian, for the returned columns
  std::size_t components = 1;
};

/// Eigenvectors 2..m+1 of the normalized Laplacian, rows scaled by
/// degree^(−1/2). The trivial eigenvector D^{1/2}·1 is shifted out of the
/// spectrum first, so on a disconnected graph the returned vectors are the
/// remaining null-space directions, which separate the components.
inline SpectralResult spectral_from_adjacency(const Matrix& adjacency, int out_dims) {
  const Eigen::Index n = adjacency.rows();
  if (n < out_dims + 1) throw GeometryError(GeometryError::Kind::InvalidParameter, "spectral: too few points for the requested dims");
  SpectralResult out;
  connected_components(adjacency, &out.components);
  const Vector deg = adjacency.rowwise().sum();
  Vector u = deg.cwiseSqrt();
  if (u.norm() > 0.0) u.normalize();
  Matrix l = normalized_laplacian(adjacency);
  l += 3.0 * u * u.transpose();  // spectrum of L_sym lies in [0, 2]
  const SymmetricEigen eig = eigen_ascending(0.5 * (l + l.transpose()));
  out.coords = eig.vectors.leftCols(out_dims);
  out.eigenvalues = eig.values.head(out_dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.coords.row(i) *= deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  }
  canonicalize_signs(out.coords);
  return out;
}

inline Projection spectral_embedding(const Matrix& x, int out_dims, int k, const Execution& ex = {}) {
  check_out_dims(out_dims, "spectral");
  const DistanceMatrix d = pairwise_distances(x, ex);
  SpectralResult r = spectral_from_adjacency(knn_graph(d, k, true), out_dims);
  Projection p;
  p.coords = std::move(r.coords);
  p.method = "spectral";
  p.params = {{"dims", out_dims}, {"k", k}};
  p.item_ids = index_ids(x.rows());
  p.metadata = {{"components", static_cast<double>(r.components)}, {"disconnected", r.components > 1 ? 1.0 : 0.0}};
  return p;
}

}  // namespace semgeo
