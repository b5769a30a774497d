#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "semgeo/projection.hpp"
#include "semgeo/util/linalg.hpp"
#include "semgeo/util/parallel.hpp"

namespace semgeo {

/// n×n Euclidean distances: symmetric, zero diagonal.
struct DistanceMatrix {
  Matrix values;
  Eigen::Index size() const { return values.rows(); }
};

/// Symmetric affinities in [0, 1] with unit diagonal.
struct KernelMatrix {
  Matrix values;
};

/// Row-stochastic transition matrix.
struct DiffusionOperator {
  Matrix values;
};

/// Euclidean distances between the rows of `x`. Each entry is the plain
/// left-to-right sum of squared coordinate differences, then sqrt.
inline DistanceMatrix pairwise_distances(const Matrix& x, const Execution& ex = {}) {
  if (!x.allFinite()) throw GeometryError(GeometryError::Kind::NonFiniteInput, "pairwise_distances: non-finite input");
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const RowMatrix rows = x;
  DistanceMatrix out{Matrix::Zero(n, n)};
  parallel_for_rows(static_cast<std::size_t>(n), ex, [&](std::size_t begin, std::size_t end) {
    for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
      const double* a = rows.data() + i * d;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double* b = rows.data() + j * d;
        double s = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) {
          const double diff = a[k] - b[k];
          s += diff * diff;
        }
        const double dist = std::sqrt(s);
        out.values(i, j) = dist;
        out.values(j, i) = dist;
      }
    }
  });
  return out;
}

/// Distance from each point to its k-th nearest other point. A zero
/// bandwidth (k exact duplicates) is replaced by the smallest positive
/// distance in that row, floored at machine epsilon.
inline Vector adaptive_bandwidths(const DistanceMatrix& dist, int k) {
  const Eigen::Index n = dist.size();
  if (k < 1) throw GeometryError(GeometryError::Kind::InvalidParameter, "adaptive_bandwidths: k must be >= 1");
  if (k >= n) {
    throw GeometryError(GeometryError::Kind::KTooLarge,
                        "k=" + std::to_string(k) + " needs at least " + std::to_string(k + 1) + " points, have " + std::to_string(n));
  }
  Vector eps(n);
  std::vector<double> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    double smallest_positive = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = dist.values(i, j);
      row.push_back(v);
      if (v > 0.0) smallest_positive = std::min(smallest_positive, v);
    }
    std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
    double e = row[static_cast<std::size_t>(k - 1)];
    if (e <= 0.0) {
      e = std::isfinite(smallest_positive) ? smallest_positive : 0.0;
      e = std::max(e, std::numeric_limits<double>::epsilon());
    }
    eps(i) = e;
  }
  return eps;
}

/// K[i][j] = ½·exp(−(D[i][j]/ε_i)^α) + ½·exp(−(D[i][j]/ε_j)^α).
inline KernelMatrix alpha_decay_kernel(const DistanceMatrix& dist, const Vector& eps, double alpha) {
  const Eigen::Index n = dist.size();
  if (eps.size() != n) throw GeometryError(GeometryError::Kind::InvalidParameter, "alpha_decay_kernel: bandwidth count mismatch");
  if (!(alpha > 0.0)) throw GeometryError(GeometryError::Kind::InvalidParameter, "alpha_decay_kernel: alpha must be positive");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(eps(i) > 0.0)) throw GeometryError(GeometryError::Kind::InvalidParameter, "alpha_decay_kernel: bandwidths must be positive");
  }
  KernelMatrix out{Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = dist.values(i, j);
      const double v = 0.5 * std::exp(-std::pow(d / eps(i), alpha)) + 0.5 * std::exp(-std::pow(d / eps(j), alpha));
      out.values(i, j) = v;
      out.values(j, i) = v;
    }
  }
  return out;
}

/// Row-normalizes K into a Markov transition matrix.
inline DiffusionOperator to_markov(const KernelMatrix& kernel) {
  DiffusionOperator p{kernel.values};
  for (Eigen::Index i = 0; i < p.values.rows(); ++i) {
    const double s = p.values.row(i).sum();
    if (!(s > 0.0)) throw GeometryError(GeometryError::Kind::InvalidParameter, "to_markov: row " + std::to_string(i) + " has zero mass");
    p.values.row(i) /= s;
  }
  return p;
}

/// P^t by repeated squaring. t = 1 returns P unchanged.
inline DiffusionOperator diffuse(const DiffusionOperator& p, int t, const Execution& ex = {}) {
  if (t < 1) throw GeometryError(GeometryError::Kind::InvalidParameter, "diffuse: t must be >= 1");
  Matrix base = p.values;
  Matrix result;
  bool have_result = false;
  for (unsigned remaining = static_cast<unsigned>(t);;) {
    if (remaining & 1u) {
      result = have_result ? multiply(result, base, ex) : base;
      have_result = true;
    }
    remaining >>= 1u;
    if (remaining == 0) break;
    base = multiply(base, base, ex);
  }
  return DiffusionOperator{std::move(result)};
}

/// Potential distances: rows of −log(max(P^t, clamp)) compared with
/// Euclidean distance.
inline DistanceMatrix potential_distances(const DiffusionOperator& pt, double clamp, const Execution& ex = {}) {
  if (!(clamp > 0.0 && clamp < 1.0)) {
    throw GeometryError(GeometryError::Kind::InvalidParameter, "potential_distances: clamp must be in (0, 1)");
  }
  const Matrix potential = -(pt.values.array().max(clamp).log()).matrix();
  return pairwise_distances(potential, ex);
}

}  // namespace semgeo
