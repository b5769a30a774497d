#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "semgeo/dr/linear.hpp"
#include "semgeo/dr/manifold.hpp"
#include "semgeo/dr/tsne.hpp"
#include "semgeo/embed/embedding_matrix.hpp"
#include "semgeo/phate/phate.hpp"

namespace semgeo {

struct DrMethod {
  std::string name = "phate";
  ParamRecord params;  // overrides; unspecified keys take the method defaults
};

inline constexpr std::array<std::string_view, 8> kImplementedMethods{"phate", "pca", "cmds", "kpca", "isomap", "lle", "spectral", "tsne"};
inline constexpr std::array<std::string_view, 4> kReservedMethods{"umap", "trimap", "pacmap", "forceatlas2"};

inline bool is_reserved_method(std::string_view name) {
  return std::find(kReservedMethods.begin(), kReservedMethods.end(), name) != kReservedMethods.end();
}

inline bool is_implemented_method(std::string_view name) {
  return std::find(kImplementedMethods.begin(), kImplementedMethods.end(), name) != kImplementedMethods.end();
}

/// Throws UnimplementedMethod / UnknownMethod for names that cannot run.
inline void check_method_name(std::string_view name) {
  if (is_implemented_method(name)) return;
  if (is_reserved_method(name)) {
    throw GeometryError(GeometryError::Kind::UnimplementedMethod,
                        "method '" + std::string(name) + "' is reserved but not implemented (umap, trimap, pacmap and forceatlas2 are out of scope)");
  }
  throw GeometryError(GeometryError::Kind::UnknownMethod, "unknown method '" + std::string(name) + "'");
}

/// Every tunable parameter of a method with its default value.
inline ParamRecord default_params(std::string_view name) {
  check_method_name(name);
  ParamRecord r{{"normalize", 1.0}};
  if (name == "phate") {
    const PhateParams d;
    r = d.record();
    r.erase("dims");
  } else if (name == "kpca") {
    r.insert({{"gamma", 1.0}, {"linear", 0.0}});
  } else if (name == "isomap" || name == "lle" || name == "spectral") {
    r["k"] = 10;
  } else if (name == "tsne") {
    const TsneParams d;
    r.insert({{"perplexity", d.perplexity}, {"iters", d.iters}, {"learning_rate", d.learning_rate}, {"exaggeration", d.exaggeration}});
  }
  return r;
}

/// Defaults overlaid with `method.params`, rejecting unknown keys.
inline ParamRecord resolve_params(const DrMethod& method) {
  ParamRecord r = default_params(method.name);
  for (const auto& [key, value] : method.params) {
    auto it = r.find(key);
    if (it == r.end()) {
      throw GeometryError(GeometryError::Kind::InvalidParameter, "method '" + method.name + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw GeometryError(GeometryError::Kind::InvalidParameter, "parameter '" + key + "' must be finite");
    it->second = value;
  }
  return r;
}

namespace detail {

inline int int_param(const ParamRecord& r, const std::string& key) {
  const double v = r.at(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw GeometryError(GeometryError::Kind::InvalidParameter, "parameter '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

inline bool flag_param(const ParamRecord& r, const std::string& key) {
  const double v = r.at(key);
  if (v != 0.0 && v != 1.0) throw GeometryError(GeometryError::Kind::InvalidParameter, "parameter '" + key + "' must be 0 or 1");
  return v == 1.0;
}

}  // namespace detail

/// Runs the named method. Rows are L2-normalized first unless normalize=0.
/// The returned params hold every effective parameter plus "dims".
inline Projection project(const EmbeddingMatrix& m, const DrMethod& method, int out_dims, std::int64_t seed,
                          const Execution& ex = {}) {
  const ParamRecord r = resolve_params(method);
  check_out_dims(out_dims, method.name.c_str());
  const bool normalize = detail::flag_param(r, "normalize");
  const std::string& name = method.name;

  Projection p;
  if (name == "phate") {
    PhateParams pp;
    pp.k = detail::int_param(r, "k");
    pp.alpha = r.at("alpha");
    pp.t = detail::int_param(r, "t");
    pp.out_dims = out_dims;
    pp.seed = seed;
    pp.pot_clamp = r.at("pot_clamp");
    pp.mds_max_iter = detail::int_param(r, "mds_max_iter");
    pp.mds_tol = r.at("mds_tol");
    pp.normalize = normalize;
    p = phate(m, pp, ex);
  } else {
    const Matrix x = normalize && !m.normalized ? l2_normalize(m).values : m.values;
    if (name == "pca") {
      p = pca(x, out_dims);
    } else if (name == "cmds") {
      p = classical_mds(pairwise_distances(x, ex), out_dims);
    } else if (name == "kpca") {
      p = kernel_pca(x, out_dims, r.at("gamma"), detail::flag_param(r, "linear"), ex);
    } else if (name == "isomap") {
      p = isomap(x, out_dims, detail::int_param(r, "k"), ex);
    } else if (name == "lle") {
      p = lle(x, out_dims, detail::int_param(r, "k"), ex);
    } else if (name == "spectral") {
      p = spectral_embedding(x, out_dims, detail::int_param(r, "k"), ex);
    } else {
      TsneParams tp;
      tp.perplexity = r.at("perplexity");
      tp.iters = detail::int_param(r, "iters");
      tp.learning_rate = r.at("learning_rate");
      tp.exaggeration = r.at("exaggeration");
      p = tsne(x, out_dims, tp, seed, ex);
    }
  }
  p.method = name;
  p.params = r;
  p.params["dims"] = out_dims;
  p.model_id = m.model_id;
  p.seed = seed;
  return p;
}

}  // namespace semgeo
