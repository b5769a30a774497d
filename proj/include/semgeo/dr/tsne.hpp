#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "semgeo/dr/linear.hpp"
#include "semgeo/phate/stages.hpp"
#include "semgeo/projection.hpp"
#include "semgeo/util/random.hpp"
#include "semgeo/util/text.hpp"

namespace semgeo {

struct TsneParams {
  double perplexity = 30.0;
  int iters = 1000;
  double learning_rate = 200.0;
  double exaggeration = 12.0;
  int exaggeration_iters = 250;
  int momentum_switch = 250;
  double momentum_start = 0.5;
  double momentum_final = 0.8;
};

inline constexpr double kTsneEntropyTol = 1e-5;
inline constexpr int kTsneBisectionSteps = 50;

/// Conditional distribution p_{j|i} for one row of squared distances
/// (entry `self` ignored), bandwidth chosen by bisection on the entropy so
/// that 2^H matches the perplexity.
inline Vector conditional_probabilities(const Vector& sq_dist, Eigen::Index self, double perplexity, double* beta_out = nullptr) {
  const Eigen::Index n = sq_dist.size();
  const double target = std::log(perplexity);
  double dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != self) dmin = std::min(dmin, sq_dist(j));
  }
  double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
  Vector p(n);
  for (int step = 0; step < kTsneBisectionSteps; ++step) {
    double sum = 0.0, weighted = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == self) {
        p(j) = 0.0;
        continue;
      }
      const double shifted = sq_dist(j) - dmin;
      p(j) = std::exp(-beta * shifted);
      sum += p(j);
      weighted += shifted * p(j);
    }
    const double entropy = std::log(sum) + beta * weighted / sum;
    p /= sum;
    if (std::abs(entropy - target) < kTsneEntropyTol) break;
    if (entropy > target) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
  }
  if (beta_out != nullptr) *beta_out = beta;
  return p;
}

/// Symmetrized joint probabilities (P + Pᵀ)/2n, floored at 1e-12 and
/// renormalized.
inline Matrix joint_probabilities(const DistanceMatrix& dist, double perplexity, const Execution& ex = {}) {
  const Eigen::Index n = dist.size();
  const Matrix sq = dist.values.array().square().matrix();
  Matrix cond(n, n);
  parallel_for_rows(static_cast<std::size_t>(n), ex, [&](std::size_t begin, std::size_t end) {
    for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
      cond.row(i) = conditional_probabilities(sq.row(i).transpose(), i, perplexity).transpose();
    }
  });
  Matrix p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
  p = p.array().max(1e-12).matrix();
  p.diagonal().setZero();
  p /= p.sum();
  return p;
}

struct TsneResult {
  Matrix coords;
  std::vector<double> kl_history;  // KL(P‖Q) after each iteration
  int rejected_steps = 0;
  int iterations = 0;
};

namespace detail {

/// Gaussian start with scale 1e-4. Each point's draw is keyed by the seed
/// and the bytes of its input row, so permuting the input permutes the start.
inline Matrix tsne_init(const Matrix& x, int out_dims, std::int64_t seed) {
  Matrix y(x.rows(), out_dims);
  std::string bytes;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    bytes.clear();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(x(i, c));
      for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
    }
    const auto digest = sha256(bytes);
    std::vector<std::uint32_t> words{0x74736e65u};
    push_u64(words, static_cast<std::uint64_t>(seed));
    for (std::size_t w = 0; w < 8; ++w) {
      words.push_back(static_cast<std::uint32_t>(digest[4 * w]) | static_cast<std::uint32_t>(digest[4 * w + 1]) << 8 |
                      static_cast<std::uint32_t>(digest[4 * w + 2]) << 16 | static_cast<std::uint32_t>(digest[4 * w + 3]) << 24);
    }
    auto rng = make_engine(words);
    for (int c = 0; c < out_dims; ++c) y(i, c) = 1e-4 * standard_normal(rng);
  }
  return y;
}

struct TsneState {
  Matrix num;        // 1 / (1 + ‖y_i − y_j‖²), zero diagonal
  double z = 0.0;    // Σ num
  double attr = 0.0; // Σ p_ij log(1 + ‖y_i − y_j‖²)
};

inline TsneState tsne_evaluate(const Matrix& p, const Matrix& y, const Execution& ex) {
  const Eigen::Index n = y.rows();
  TsneState s;
  s.num.resize(n, n);
  parallel_for_rows(static_cast<std::size_t>(n), ex, [&](std::size_t begin, std::size_t end) {
    for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
      for (Eigen::Index j = 0; j < n; ++j) s.num(i, j) = j == i ? 0.0 : 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
    }
  });
  s.z = parallel_sum(static_cast<std::size_t>(n), ex, [&](std::size_t i) { return s.num.row(static_cast<Eigen::Index>(i)).sum(); });
  s.attr = parallel_sum(static_cast<std::size_t>(n), ex, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) acc -= p(i, j) * std::log(s.num(i, j));
    }
    return acc;
  });
  return s;
}

}  // namespace detail

namespace detail {

inline TsneResult tsne_fit_ordered(const Matrix& x, int out_dims, const TsneParams& params, std::int64_t seed, const Execution& ex) {
  check_out_dims(out_dims, "tsne");
  const Eigen::Index n = x.rows();
  if (!(params.perplexity > 0.0)) throw GeometryError(GeometryError::Kind::InvalidParameter, "tsne: perplexity must be positive");
  if (n < 4 || params.perplexity >= static_cast<double>(n - 1) / 3.0) {
    throw GeometryError(GeometryError::Kind::PerplexityTooLarge, "tsne: perplexity " + std::to_string(params.perplexity) +
                                                                     " must be below (n-1)/3 for n=" + std::to_string(n));
  }
  if (params.iters < 0 || !(params.learning_rate > 0.0) || !(params.exaggeration >= 1.0)) {
    throw GeometryError(GeometryError::Kind::InvalidParameter, "tsne: bad optimizer settings");
  }
  const DistanceMatrix dist = pairwise_distances(x, ex);
  const Matrix p = joint_probabilities(dist, params.perplexity, ex);
  double entropy_p = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (p(i, j) > 0.0) entropy_p += p(i, j) * std::log(p(i, j));
    }
  }

  TsneResult out;
  Matrix y = detail::tsne_init(x, out_dims, seed);
  y.rowwise() -= y.colwise().mean();
  Matrix velocity = Matrix::Zero(n, out_dims);
  Matrix gains = Matrix::Ones(n, out_dims);
  Matrix grad(n, out_dims);
  double scale = 1.0;
  detail::TsneState state = detail::tsne_evaluate(p, y, ex);

  for (int iter = 0; iter < params.iters; ++iter) {
    const double a = iter < params.exaggeration_iters ? params.exaggeration : 1.0;
    const double momentum = iter < params.momentum_switch ? params.momentum_start : params.momentum_final;
    const double objective = a * state.attr + std::log(state.z);
    parallel_for_rows(static_cast<std::size_t>(n), ex, [&](std::size_t begin, std::size_t end) {
      for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
        Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(out_dims);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i) continue;
          const double num = state.num(i, j);
          g += ((a * p(i, j) - num / state.z) * num) * (y.row(i) - y.row(j));
        }
        grad.row(i) = 4.0 * g;
      }
    });
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int c = 0; c < out_dims; ++c) {
        double& gain = gains(i, c);
        gain = (grad(i, c) > 0.0) != (velocity(i, c) > 0.0) ? gain + 0.2 : gain * 0.8;
        gain = std::max(gain, 0.01);
      }
    }
    Matrix next_velocity = momentum * velocity - (params.learning_rate * scale) * gains.cwiseProduct(grad);
    Matrix candidate = y + next_velocity;
    candidate.rowwise() -= candidate.colwise().mean();
    detail::TsneState next = detail::tsne_evaluate(p, candidate, ex);
    if (a * next.attr + std::log(next.z) <= objective) {
      y = std::move(candidate);
      velocity = std::move(next_velocity);
      state = std::move(next);
      scale = std::min(1.0, 2.0 * scale);
    } else {
      velocity.setZero();
      gains.setOnes();
      scale *= 0.5;
      ++out.rejected_steps;
    }
    out.kl_history.push_back(state.attr + std::log(state.z) + entropy_p);
    out.iterations = iter + 1;
    if (scale < 1e-12) break;
  }
  out.coords = std::move(y);
  return out;
}

}  // namespace detail

/// Exact t-SNE.
///
/// Gradient descent with momentum and per-coordinate gains, early
/// exaggeration on P. A step that raises the current objective is
/// rejected (velocity and gains reset, step size halved), so the cost
/// never increases within a phase.
///
/// Rows are optimized in lexicographic order of their values and mapped
/// back, so permuting the input permutes the output exactly.
inline TsneResult tsne_fit(const Matrix& x, int out_dims, const TsneParams& params, std::int64_t seed, const Execution& ex = {}) {
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
    }
    return false;
  });
  Matrix sorted(n, x.cols());
  for (Eigen::Index r = 0; r < n; ++r) sorted.row(r) = x.row(order[static_cast<std::size_t>(r)]);
  TsneResult out = detail::tsne_fit_ordered(sorted, out_dims, params, seed, ex);
  Matrix coords(n, out.coords.cols());
  for (Eigen::Index r = 0; r < n; ++r) coords.row(order[static_cast<std::size_t>(r)]) = out.coords.row(r);
  out.coords = std::move(coords);
  return out;
}

inline Projection tsne(const Matrix& x, int out_dims, const TsneParams& params, std::int64_t seed, const Execution& ex = {}) {
  TsneResult r = tsne_fit(x, out_dims, params, seed, ex);
  Projection p;
  p.coords = std::move(r.coords);
  p.method = "tsne";
  p.params = {{"dims", out_dims},
              {"perplexity", params.perplexity},
              {"iters", params.iters},
              {"learning_rate", params.learning_rate},
              {"exaggeration", params.exaggeration}};
  p.item_ids = index_ids(x.rows());
  p.seed = seed;
  p.metadata = {{"kl_divergence", r.kl_history.empty() ? 0.0 : r.kl_history.back()},
                {"iterations", r.iterations},
                {"rejected_steps", r.rejected_steps}};
  return p;
}

}  // namespace semgeo
