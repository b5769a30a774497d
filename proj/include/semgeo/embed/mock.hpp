#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semgeo/datasets/lexicon.hpp"
#include "semgeo/embed/embedding_matrix.hpp"
#include "semgeo/util/random.hpp"
#include "semgeo/util/text.hpp"

namespace semgeo {

namespace detail {

inline constexpr std::uint32_t kMockTextTag = 0x74657874;      // "text"
inline constexpr std::uint32_t kMockCategoryTag = 0x63617467;  // "catg"

inline Vector seeded_unit_vector(std::uint32_t tag, std::int64_t seed, std::string_view key, std::size_t dim) {
  std::vector<std::uint32_t> words{tag};
  push_u64(words, static_cast<std::uint64_t>(seed));
  const Sha256Digest digest = sha256(key);
  for (std::size_t i = 0; i < digest.size(); i += 4) {
    words.push_back(static_cast<std::uint32_t>(digest[i]) | static_cast<std::uint32_t>(digest[i + 1]) << 8 |
                    static_cast<std::uint32_t>(digest[i + 2]) << 16 | static_cast<std::uint32_t>(digest[i + 3]) << 24);
  }
  push_u64(words, dim);
  auto rng = make_engine(words);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = standard_normal(rng);
  return v / v.norm();
}

}  // namespace detail

inline constexpr double kMockCategoryWeight = 0.5;

/// Deterministic offline embeddings. Row i is a unit vector keyed by
/// (seed, sha256(text), dim) plus 0.5 times a unit vector keyed by
/// (seed, category), renormalized. Items of one category share the bias.
inline EmbeddingMatrix mock_embeddings(std::span<const LexicalItem> items, std::size_t dim, std::int64_t seed,
                                       std::string model_id = "mock") {
  if (dim < 2) throw EmbedError(EmbedError::Kind::InvalidConfig, "mock_embeddings: dim must be >= 2");
  EmbeddingMatrix out;
  out.model_id = std::move(model_id);
  out.values.resize(static_cast<Eigen::Index>(items.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < items.size(); ++i) {
    Vector v = detail::seeded_unit_vector(detail::kMockTextTag, seed, items[i].text, dim);
    v += kMockCategoryWeight * detail::seeded_unit_vector(detail::kMockCategoryTag, seed, items[i].category, dim);
    out.values.row(static_cast<Eigen::Index>(i)) = (v / v.norm()).transpose();
  }
  out.normalized = true;
  return out;
}

}  // namespace semgeo
