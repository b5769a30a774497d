#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "semgeo/util/linalg.hpp"

namespace semgeo {

class EmbedError : public std::runtime_error {
 public:
  enum class Kind { AuthMissing, HttpStatus, DimensionMismatch, Timeout, Transport, BadResponse, ZeroRow, InvalidConfig };

  EmbedError(Kind kind, std::string message, int status = 0, std::size_t index = 0, int attempts = 0)
      : std::runtime_error(std::move(message)), kind_(kind), status_(status), index_(index), attempts_(attempts) {}

  Kind kind() const { return kind_; }
  int status() const { return status_; }
  std::size_t index() const { return index_; }
  int attempts() const { return attempts_; }

 private:
  Kind kind_;
  int status_;
  std::size_t index_;
  int attempts_;
};

/// n×d embeddings, row i for item i.
struct EmbeddingMatrix {
  Matrix values;
  std::string model_id;
  bool normalized = false;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
};

/// Scales each row to unit L2 norm. Throws EmbedError(ZeroRow) on a zero row.
inline EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m) {
  EmbeddingMatrix out = m;
  for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
    const double norm = out.values.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw EmbedError(EmbedError::Kind::ZeroRow, "cannot normalize zero row " + std::to_string(i), 0,
                       static_cast<std::size_t>(i));
    }
    out.values.row(i) /= norm;
  }
  out.normalized = true;
  return out;
}

}  // namespace semgeo
