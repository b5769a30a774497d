#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "semgeo/util/linalg.hpp"

namespace semgeo {

class DiagnosticsError : public std::runtime_error {
 public:
  enum class Kind { SingleLabel, TooFewPoints, TooFewPairs, Misaligned };
  DiagnosticsError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Dense label ids in order of first appearance.
inline std::vector<std::size_t> encode_labels(const std::vector<std::string>& labels, std::size_t* distinct = nullptr) {
  std::map<std::string, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(ids.emplace(l, ids.size()).first->second);
  if (distinct != nullptr) *distinct = ids.size();
  return out;
}

/// Mean silhouette with Euclidean distances. Points alone in their
/// cluster score 0, and so does 0/0 (all distances zero).
inline double silhouette_score(const Matrix& points, const std::vector<std::string>& labels) {
  const Eigen::Index n = points.rows();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw DiagnosticsError(DiagnosticsError::Kind::Misaligned, "silhouette: label count differs from point count");
  }
  std::size_t k = 0;
  const std::vector<std::size_t> lab = encode_labels(labels, &k);
  if (k < 2) throw DiagnosticsError(DiagnosticsError::Kind::SingleLabel, "silhouette: needs at least 2 distinct labels");
  if (n < 3) throw DiagnosticsError(DiagnosticsError::Kind::TooFewPoints, "silhouette: needs at least 3 points");
  std::vector<double> size(k, 0.0);
  for (std::size_t l : lab) size[l] += 1.0;
  double total = 0.0;
  std::vector<double> sums(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t own = lab[static_cast<std::size_t>(i)];
    if (size[own] < 2.0) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) sums[lab[static_cast<std::size_t>(j)]] += (points.row(i) - points.row(j)).norm();
    }
    const double a = sums[own] / (size[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < k; ++l) {
      if (l != own) b = std::min(b, sums[l] / size[l]);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

/// Ranks starting at 1, ties sharing their average rank.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson: need two equal-length samples of size >= 2");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman rank correlation; 0 when either sample is constant.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

}  // namespace semgeo
