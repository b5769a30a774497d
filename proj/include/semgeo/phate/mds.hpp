#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "semgeo/phate/stages.hpp"
#include "semgeo/projection.hpp"
#include "semgeo/util/linalg.hpp"
#include "semgeo/util/parallel.hpp"
#include "semgeo/util/random.hpp"

namespace semgeo {

struct ClassicalMdsResult {
  Matrix coords;
  Vector eigenvalues;                    // all, descending
  std::size_t negative_eigenvalues = 0;  // eigenvalues below −tolerance
  std::size_t clipped_components = 0;    // requested components with eigenvalue at or below tolerance
};

/// Torgerson scaling: top eigenpairs of −½·J·D²·J, coordinates scaled by
/// sqrt(λ). Eigenvalues within rounding of zero (|λ| <= 1e-10·max(1, |λ0|))
/// or below it give zero columns, as do dimensions beyond n.
inline ClassicalMdsResult classical_mds_coords(const DistanceMatrix& dist, int out_dims) {
  if (out_dims < 1) throw GeometryError(GeometryError::Kind::InvalidParameter, "classical_mds: out_dims must be >= 1");
  const Eigen::Index n = dist.size();
  ClassicalMdsResult out;
  out.coords = Matrix::Zero(n, out_dims);
  if (n == 0) return out;
  const Matrix b = -0.5 * double_center(dist.values.array().square().matrix());
  SymmetricEigen eig = eigen_descending(0.5 * (b + b.transpose()));
  out.eigenvalues = eig.values;
  const double scale = std::max(1.0, std::abs(eig.values(0)));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (eig.values(j) < -1e-10 * scale) ++out.negative_eigenvalues;
  }
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(out_dims, n); ++c) {
    const double lambda = eig.values(c);
    if (lambda <= 1e-10 * scale) {
      ++out.clipped_components;
      continue;
    }
    out.coords.col(c) = eig.vectors.col(c) * std::sqrt(lambda);
  }
  return out;
}

inline Projection classical_mds(const DistanceMatrix& dist, int out_dims) {
  ClassicalMdsResult r = classical_mds_coords(dist, out_dims);
  Projection p;
  p.coords = std::move(r.coords);
  p.method = "cmds";
  p.params = {{"dims", out_dims}};
  p.item_ids = index_ids(p.coords.rows());
  p.metadata = {{"negative_eigenvalues", static_cast<double>(r.negative_eigenvalues)},
                {"clipped_components", static_cast<double>(r.clipped_components)}};
  return p;
}

/// Raw stress Σ_{i<j} (D_ij − ‖x_i − x_j‖)².
inline double raw_stress(const DistanceMatrix& dist, const Matrix& x, const Execution& ex = {}) {
  const Eigen::Index n = dist.size();
  return parallel_sum(static_cast<std::size_t>(n), ex, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    double s = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = dist.values(i, j) - (x.row(i) - x.row(j)).norm();
      s += r * r;
    }
    return s;
  });
}

struct SmacofResult {
  Matrix coords;
  double stress = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> stress_history;  // initial stress, then one entry per accepted iterate
};

/// Stress majorization with unit weights. Iterates the Guttman transform
/// until the relative stress decrease falls below `tol` or `max_iter` is
/// reached. An iterate that would raise stress (round-off near a fixed
/// point) is rejected and iteration stops, so the history is monotone.
inline SmacofResult smacof(const DistanceMatrix& dist, Matrix init, int max_iter, double tol, const Execution& ex = {}) {
  const Eigen::Index n = dist.size();
  const Eigen::Index m = init.cols();
  SmacofResult out;
  out.coords = std::move(init);
  out.stress = raw_stress(dist, out.coords, ex);
  out.stress_history.push_back(out.stress);
  if (n < 2 || out.stress == 0.0) {
    out.converged = true;
    return out;
  }
  Matrix next(n, m);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Matrix& x = out.coords;
    parallel_for_rows(static_cast<std::size_t>(n), ex, [&](std::size_t begin, std::size_t end) {
      for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(m);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i) continue;
          const Eigen::RowVectorXd diff = x.row(i) - x.row(j);
          const double d = diff.norm();
          if (d > 0.0) acc += (dist.values(i, j) / d) * diff;
        }
        next.row(i) = acc / static_cast<double>(n);
      }
    });
    const double s = raw_stress(dist, next, ex);
    if (!(s <= out.stress)) break;
    const double previous = out.stress;
    out.coords = next;
    out.stress = s;
    out.stress_history.push_back(s);
    out.iterations = iter + 1;
    if (s == 0.0 || (previous - s) / previous < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// Metric MDS: classical-MDS start refined by SMACOF. If the classical
/// start collapses to the origin while distances are nonzero, a seeded
/// Gaussian start is used instead.
inline Projection metric_mds(const DistanceMatrix& dist, int out_dims, std::int64_t seed, int max_iter, double tol,
                             const Execution& ex = {}) {
  if (out_dims != 2 && out_dims != 3) throw GeometryError(GeometryError::Kind::InvalidParameter, "metric_mds: out_dims must be 2 or 3");
  if (max_iter < 0 || !(tol >= 0.0)) throw GeometryError(GeometryError::Kind::InvalidParameter, "metric_mds: bad iteration settings");
  const Eigen::Index n = dist.size();
  ClassicalMdsResult start = classical_mds_coords(dist, out_dims);
  Matrix init = std::move(start.coords);
  if (n > 1 && init.isZero(0.0) && dist.values.maxCoeff() > 0.0) {
    std::vector<std::uint32_t> words{0x736d6163u};
    push_u64(words, static_cast<std::uint64_t>(seed));
    auto rng = make_engine(words);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < out_dims; ++c) init(i, c) = standard_normal(rng);
    }
  }
  SmacofResult fit = smacof(dist, std::move(init), max_iter, tol, ex);
  Projection p;
  p.coords = std::move(fit.coords);
  p.method = "mds";
  p.params = {{"dims", out_dims}, {"mds_max_iter", max_iter}, {"mds_tol", tol}};
  p.item_ids = index_ids(n);
  p.seed = seed;
  p.stress = fit.stress;
  p.metadata = {{"mds_iterations", fit.iterations},
                {"mds_converged", fit.converged ? 1.0 : 0.0},
                {"negative_eigenvalues", static_cast<double>(start.negative_eigenvalues)}};
  return p;
}

}  // namespace semgeo
