#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "semgeo/util/linalg.hpp"

namespace semgeo {

/// Failures of the geometry stages (PHATE and the comparison methods).
class GeometryError : public std::runtime_error {
 public:
  enum class Kind {
    NonFiniteInput,
    KTooLarge,
    InvalidParameter,
    UnimplementedMethod,
    UnknownMethod,
    DegenerateKernel,
    DisconnectedGraph,
    PerplexityTooLarge,
  };

  GeometryError(Kind kind, std::string message, std::size_t count = 0)
      : std::runtime_error(std::move(message)), kind_(kind), count_(count) {}

  Kind kind() const { return kind_; }
  /// Component count for DisconnectedGraph.
  std::size_t count() const { return count_; }

 private:
  Kind kind_;
  std::size_t count_;
};

using ParamRecord = std::map<std::string, double>;

/// Low-dimensional coordinates plus everything needed to reproduce them.
struct Projection {
  Matrix coords;  // n × out_dims
  std::string method;
  ParamRecord params;
  std::string model_id;
  std::vector<std::string> item_ids;
  std::int64_t seed = 0;
  double stress = 0.0;
  ParamRecord metadata;  // method-specific diagnostics (iterations, clipped eigenvalues, ...)

  Eigen::Index rows() const { return coords.rows(); }
  Eigen::Index dims() const { return coords.cols(); }
};

inline std::vector<std::string> index_ids(Eigen::Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace semgeo
