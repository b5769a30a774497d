#pragma once

#include <cstdint>
#include <string>

#include "semgeo/embed/embedding_matrix.hpp"
#include "semgeo/phate/mds.hpp"
#include "semgeo/phate/stages.hpp"
#include "semgeo/projection.hpp"

namespace semgeo {

struct PhateParams {
  int k = 10;         // neighbours for the adaptive bandwidth
  double alpha = 10;  // kernel decay exponent
  int t = 20;         // diffusion steps
  int out_dims = 2;
  std::int64_t seed = 0;
  double pot_clamp = 1e-7;
  int mds_max_iter = 500;
  double mds_tol = 1e-6;
  bool normalize = true;  // L2-normalize embedding rows first

  void validate() const {
    auto bad = [](const std::string& why) { return GeometryError(GeometryError::Kind::InvalidParameter, "phate: " + why); };
    if (k < 1) throw bad("k must be >= 1");
    if (!(alpha > 0.0)) throw bad("alpha must be positive");
    if (t < 1) throw bad("t must be >= 1");
    if (out_dims != 2 && out_dims != 3) throw bad("out_dims must be 2 or 3");
    if (!(pot_clamp > 0.0 && pot_clamp < 1.0)) throw bad("pot_clamp must be in (0, 1)");
    if (mds_max_iter < 0) throw bad("mds_max_iter must be >= 0");
    if (!(mds_tol >= 0.0)) throw bad("mds_tol must be >= 0");
  }

  ParamRecord record() const {
    return {{"k", k},
            {"alpha", alpha},
            {"t", t},
            {"dims", out_dims},
            {"pot_clamp", pot_clamp},
            {"mds_max_iter", mds_max_iter},
            {"mds_tol", mds_tol},
            {"normalize", normalize ? 1.0 : 0.0}};
  }
};

/// Intermediate products of one PHATE run, exposed for inspection.
struct PhateTrace {
  DistanceMatrix distances;
  Vector bandwidths;
  KernelMatrix kernel;
  DiffusionOperator markov;
  DiffusionOperator diffused;
  DistanceMatrix potential;
};

/// distances → adaptive bandwidths → alpha-decay kernel → Markov operator
/// → t-step diffusion → potential distances → metric MDS.
inline Projection phate(const EmbeddingMatrix& m, const PhateParams& params, const Execution& ex = {},
                        PhateTrace* trace = nullptr) {
  params.validate();
  const Eigen::Index n = m.rows();
  if (n < params.k + 1) {
    throw GeometryError(GeometryError::Kind::KTooLarge,
                        "phate: k=" + std::to_string(params.k) + " needs at least " + std::to_string(params.k + 1) + " rows, have " +
                            std::to_string(n));
  }
  const Matrix& input = (params.normalize && !m.normalized) ? l2_normalize(m).values : m.values;
  DistanceMatrix dist = pairwise_distances(input, ex);
  Vector eps = adaptive_bandwidths(dist, params.k);
  KernelMatrix kernel = alpha_decay_kernel(dist, eps, params.alpha);
  DiffusionOperator markov = to_markov(kernel);
  DiffusionOperator diffused = diffuse(markov, params.t, ex);
  DistanceMatrix potential = potential_distances(diffused, params.pot_clamp, ex);
  Projection p = metric_mds(potential, params.out_dims, params.seed, params.mds_max_iter, params.mds_tol, ex);
  p.method = "phate";
  p.params = params.record();
  p.model_id = m.model_id;
  if (trace != nullptr) {
    *trace = PhateTrace{std::move(dist), std::move(eps), std::move(kernel), std::move(markov), std::move(diffused), std::move(potential)};
  }
  return p;
}

}  // namespace semgeo
