#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semgeo/datasets/lexicon.hpp"
#include "semgeo/diagnostics/stats.hpp"
#include "semgeo/util/linalg.hpp"
#include "semgeo/util/random.hpp"

namespace semgeo {

inline constexpr double kSpiralSweepGate = std::numbers::pi;
inline constexpr double kCollapseRankThreshold = 1.5;
inline constexpr double kCollapseDuplicateThreshold = 0.5;
inline constexpr double kDuplicateRadius = 1e-3;  // × median pairwise distance
inline constexpr double kModalitySeparatedThreshold = 0.9;
inline constexpr std::size_t kModalityNullDraws = 1000;

namespace detail {

inline void check_aligned(const Matrix& coords, std::span<const LexicalItem> items) {
  if (static_cast<std::size_t>(coords.rows()) != items.size()) {
    throw DiagnosticsError(DiagnosticsError::Kind::Misaligned, "projection has " + std::to_string(coords.rows()) +
                                                                   " rows but the dataset has " + std::to_string(items.size()) + " items");
  }
}

inline Matrix select_rows(const Matrix& coords, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), coords.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = coords.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

/// Covariance eigenvalues, negatives from round-off clipped to 0.
inline Vector covariance_spectrum(const Matrix& points) {
  const Matrix c = covariance(points);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseMax(0.0).reverse();
}

}  // namespace detail

/// Semantic domain of a category: its first two dot-separated segments.
inline std::string semantic_domain(const std::string& category) {
  const auto first = category.find('.');
  if (first == std::string::npos) return category;
  const auto second = category.find('.', first + 1);
  return second == std::string::npos ? category : category.substr(0, second);
}

/// Mean silhouette of level=word items labeled by semantic domain.
inline double clustering_score(const Matrix& coords, std::span<const LexicalItem> items) {
  detail::check_aligned(coords, items);
  std::vector<std::size_t> rows;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].level == Level::word) {
      rows.push_back(i);
      labels.push_back(semantic_domain(items[i].category));
    }
  }
  return silhouette_score(detail::select_rows(coords, rows), labels);
}

/// Linearity ratio λ₁/Σλ of the family's covariance spectrum, in [1/m, 1].
/// A family collapsed to one point has no preferred direction and scores 1/m.
inline double branching_score(const Matrix& points) {
  if (points.rows() < 3) throw DiagnosticsError(DiagnosticsError::Kind::TooFewPoints, "branching_score: family needs at least 3 points");
  const Vector lambda = detail::covariance_spectrum(points);
  const double total = lambda.sum();
  if (!(total > 0.0)) return 1.0 / static_cast<double>(points.cols());
  return lambda(0) / total;
}

/// Points of one ordinal sequence, in rank order.
struct OrdinalSequence {
  std::vector<std::size_t> rows;  // row indices into the coordinates
  std::vector<std::int64_t> ranks;  // strictly increasing
};

/// Sequences from every category whose items carry an order.
inline std::map<std::string, OrdinalSequence> ordinal_sequences(std::span<const LexicalItem> items) {
  // one sequence per (language, category); keyed "lang/category"
  std::map<std::string, std::vector<std::pair<std::int64_t, std::size_t>>> by_category;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].order) by_category[items[i].lang + "/" + items[i].category].emplace_back(*items[i].order, i);
  }
  std::map<std::string, OrdinalSequence> out;
  for (auto& [cat, entries] : by_category) {
    std::sort(entries.begin(), entries.end());
    OrdinalSequence seq;
    for (const auto& [rank, row] : entries) {
      if (!seq.ranks.empty() && seq.ranks.back() == rank) continue;  // validation forbids this
      seq.ranks.push_back(rank);
      seq.rows.push_back(row);
    }
    out.emplace(cat, std::move(seq));
  }
  return out;
}

struct SpiralDetail {
  double score = 0.0;
  double sweep = 0.0;  // |net unwrapped angle|, radians
  double angle_rho = 0.0;
  double radius_rho = 0.0;
  double efficiency = 0.0;  // |net sweep| / total angular path
};

/// Spirality of an ordinal sequence about its own centroid.
///
/// Angles are unwrapped along rank order; a net sweep of at most π scores
/// 0. Otherwise the score is the geometric mean of |Spearman(angle, rank)|
/// and |Spearman(radius, rank)|, times the angular efficiency |net sweep| /
/// sum |step|. Three-dimensional coordinates are first
/// projected onto the sequence's principal plane.
inline SpiralDetail spiral_detail(const Matrix& coords, const OrdinalSequence& seq) {
  const std::size_t len = seq.rows.size();
  if (len < 5) throw DiagnosticsError(DiagnosticsError::Kind::TooFewPoints, "spiral_score: sequence needs at least 5 points");
  if (seq.ranks.size() != len) throw DiagnosticsError(DiagnosticsError::Kind::Misaligned, "spiral_score: rank count differs from row count");
  for (std::size_t i = 1; i < len; ++i) {
    if (seq.ranks[i] <= seq.ranks[i - 1]) throw DiagnosticsError(DiagnosticsError::Kind::Misaligned, "spiral_score: ranks must increase");
  }
  Matrix pts = center_columns(detail::select_rows(coords, seq.rows));
  if (pts.cols() > 2) {
    const SymmetricEigen eig = eigen_descending(covariance(pts));
    pts = Matrix(pts * eig.vectors.leftCols(2));
  } else if (pts.cols() < 2) {
    pts.conservativeResize(Eigen::NoChange, 2);
    pts.col(1).setZero();
  }
  std::vector<double> radius(len), angle(len), rank(len);
  double max_r = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    radius[i] = pts.row(static_cast<Eigen::Index>(i)).norm();
    max_r = std::max(max_r, radius[i]);
    rank[i] = static_cast<double>(seq.ranks[i]);
  }
  SpiralDetail out;
  if (!(max_r > 0.0)) return out;
  const double tiny = 1e-12 * max_r;
  std::optional<double> previous_raw;
  double unwrapped = 0.0;
  double path = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    if (radius[i] > tiny) {
      const double raw = std::atan2(pts(static_cast<Eigen::Index>(i), 1), pts(static_cast<Eigen::Index>(i), 0));
      if (previous_raw) {
        double delta = raw - *previous_raw;
        while (delta > std::numbers::pi) delta -= 2.0 * std::numbers::pi;
        while (delta <= -std::numbers::pi) delta += 2.0 * std::numbers::pi;
        unwrapped += delta;
        path += std::abs(delta);
      } else {
        unwrapped = raw;
      }
      previous_raw = raw;
    }
    angle[i] = unwrapped;  // points at the center keep the previous angle
  }
  // Leading points at the center take the first defined angle.
  std::size_t first_defined = 0;
  while (first_defined < len && radius[first_defined] <= tiny) ++first_defined;
  for (std::size_t i = 0; i < first_defined && first_defined < len; ++i) angle[i] = angle[first_defined];

  out.sweep = std::abs(angle.back() - angle.front());
  out.angle_rho = spearman(angle, rank);
  out.radius_rho = spearman(radius, rank);
  out.efficiency = path > 0.0 ? out.sweep / path : 0.0;
  if (out.sweep <= kSpiralSweepGate) return out;
  out.score = out.efficiency * std::sqrt(std::abs(out.angle_rho) * std::abs(out.radius_rho));
  return out;
}

inline double spiral_score(const Matrix& coords, const OrdinalSequence& seq) { return spiral_detail(coords, seq).score; }

struct CollapseResult {
  double effective_rank = 1.0;
  double duplicate_fraction = 0.0;
  bool collapsed = false;
};

/// Participation ratio of the covariance spectrum and the share of points
/// with a near-duplicate neighbour.
inline CollapseResult collapse_score(const Matrix& points) {
  const Eigen::Index n = points.rows();
  if (n < 3) throw DiagnosticsError(DiagnosticsError::Kind::TooFewPoints, "collapse_score: needs at least 3 points");
  CollapseResult out;
  const Vector lambda = detail::covariance_spectrum(points);
  const double sum = lambda.sum();
  const double sum_sq = lambda.squaredNorm();
  out.effective_rank = sum_sq > 0.0 ? sum * sum / sum_sq : 1.0;

  std::vector<double> pair_dists;
  pair_dists.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  Vector nearest = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      pair_dists.push_back(d);
      nearest(i) = std::min(nearest(i), d);
      nearest(j) = std::min(nearest(j), d);
    }
  }
  const std::size_t mid = pair_dists.size() / 2;
  std::nth_element(pair_dists.begin(), pair_dists.begin() + static_cast<std::ptrdiff_t>(mid), pair_dists.end());
  double median = pair_dists[mid];
  if (pair_dists.size() % 2 == 0) {
    const double lower = *std::max_element(pair_dists.begin(), pair_dists.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  const double radius = kDuplicateRadius * median;
  Eigen::Index dups = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (nearest(i) <= radius) ++dups;
  }
  out.duplicate_fraction = static_cast<double>(dups) / static_cast<double>(n);
  out.collapsed = out.effective_rank < kCollapseRankThreshold || out.duplicate_fraction > kCollapseDuplicateThreshold;
  return out;
}

/// Writing system of a level=char item: the last category segment.
inline std::string script_of(const std::string& category) {
  const auto dot = category.rfind('.');
  return dot == std::string::npos ? category : category.substr(dot + 1);
}

/// Silhouette of every unordered pair of scripts among level=char items,
/// keyed "a|b" with a < b.
inline std::map<std::string, double> script_separation(const Matrix& coords, std::span<const LexicalItem> items) {
  detail::check_aligned(coords, items);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].level == Level::character) groups[script_of(items[i].category)].push_back(i);
  }
  if (groups.size() < 2) throw DiagnosticsError(DiagnosticsError::Kind::SingleLabel, "script_separation: needs at least 2 scripts");
  std::map<std::string, double> out;
  for (auto a = groups.begin(); a != groups.end(); ++a) {
    for (auto b = std::next(a); b != groups.end(); ++b) {
      std::vector<std::size_t> rows = a->second;
      rows.insert(rows.end(), b->second.begin(), b->second.end());
      std::vector<std::string> labels(a->second.size(), a->first);
      labels.insert(labels.end(), b->second.size(), b->first);
      out[a->first + "|" + b->first] = silhouette_score(detail::select_rows(coords, rows), labels);
    }
  }
  return out;
}

struct ModalityResult {
  double ratio = 0.0;
  std::size_t pairs = 0;
  bool separated = false;
};

/// Mean emoji-to-gloss distance over the mean distance of random
/// cross-modality non-pairs (fixed draw seed). 0/0 is taken as 0.
inline ModalityResult modality_integration_score(const Matrix& coords, std::span<const LexicalItem> items, std::uint64_t seed = 0) {
  detail::check_aligned(coords, items);
  std::map<std::string, std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> by_pair;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].pair_id) continue;
    auto& slot = by_pair[*items[i].pair_id];
    (items[i].level == Level::emoji ? slot.first : slot.second) = i;
  }
  std::vector<std::size_t> emoji, text;
  for (const auto& [id, slot] : by_pair) {
    if (slot.first && slot.second) {
      emoji.push_back(*slot.first);
      text.push_back(*slot.second);
    }
  }
  if (emoji.size() < 5) {
    throw DiagnosticsError(DiagnosticsError::Kind::TooFewPairs,
                           "modality_integration: needs at least 5 emoji-text pairs, found " + std::to_string(emoji.size()));
  }
  auto dist = [&](std::size_t a, std::size_t b) {
    return (coords.row(static_cast<Eigen::Index>(a)) - coords.row(static_cast<Eigen::Index>(b))).norm();
  };
  double paired = 0.0;
  for (std::size_t p = 0; p < emoji.size(); ++p) paired += dist(emoji[p], text[p]);
  paired /= static_cast<double>(emoji.size());

  std::vector<std::uint32_t> words{0x6d6f6461u};
  push_u64(words, seed);
  auto rng = make_engine(words);
  const auto m = static_cast<std::uint64_t>(emoji.size());
  double null_mean = 0.0;
  for (std::size_t draw = 0; draw < kModalityNullDraws; ++draw) {
    const std::uint64_t e = rng() % m;
    std::uint64_t t = rng() % (m - 1);
    if (t >= e) ++t;
    null_mean += dist(emoji[e], text[t]);
  }
  null_mean /= static_cast<double>(kModalityNullDraws);

  ModalityResult out;
  out.pairs = emoji.size();
  out.ratio = null_mean > 0.0 ? paired / null_mean : 0.0;
  out.separated = out.ratio >= kModalitySeparatedThreshold;
  return out;
}

}  // namespace semgeo
