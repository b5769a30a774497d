#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "semgeo/datasets/lexicon.hpp"
#include "semgeo/embed/cache.hpp"
#include "semgeo/embed/embedding_matrix.hpp"
#include "semgeo/embed/mock.hpp"
#include "semgeo/embed/provider.hpp"

namespace semgeo {

namespace detail {

inline std::optional<std::string> resolve_token(const ProviderConfig& cfg) {
  if (cfg.auth_env.empty()) return std::nullopt;
  const char* value = std::getenv(cfg.auth_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw EmbedError(EmbedError::Kind::AuthMissing, "environment variable " + cfg.auth_env + " is not set");
  }
  return std::string(value);
}

inline void backoff_sleep(const ProviderConfig& cfg, int attempt) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  const double seconds = cfg.backoff_base_s * std::pow(2.0, attempt) * jitter(rng);
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

/// One batch with retries: transport failures, 429 and 5xx are retried
/// with exponential backoff; other statuses fail immediately.
inline std::vector<std::vector<float>> fetch_batch(const ProviderConfig& cfg, const std::vector<std::string>& texts,
                                                   const std::optional<std::string>& token, const Transport& transport) {
  const HttpRequest req = build_embedding_request(cfg, texts, token);
  const int attempts = cfg.max_retries + 1;
  std::optional<EmbedError> last;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) backoff_sleep(cfg, attempt - 1);
    try {
      const HttpResponse resp = transport(req);
      if (resp.status >= 200 && resp.status < 300) return parse_embedding_response(cfg, resp.body, texts.size());
      if (resp.status != 429 && resp.status < 500) {
        throw EmbedError(EmbedError::Kind::HttpStatus, "provider returned HTTP " + std::to_string(resp.status), resp.status,
                         0, attempt + 1);
      }
      last.emplace(EmbedError::Kind::HttpStatus, "provider returned HTTP " + std::to_string(resp.status), resp.status);
    } catch (const TransportError& e) {
      last.emplace(e.timed_out() ? EmbedError::Kind::Timeout : EmbedError::Kind::Transport, e.what());
    }
  }
  const std::string summary = std::string(last->what()) + " (gave up after " + std::to_string(attempts) +
                              " attempts, " + std::to_string(cfg.max_retries) + " retries)";
  throw EmbedError(last->kind(), summary, last->status(), 0, attempts);
}

}  // namespace detail

/// Embeddings for `items`, one row per item in item order.
///
/// The cache is consulted first; only missing texts are requested, in
/// batches of cfg.batch_size with at most cfg.max_in_flight requests in
/// flight. Any batch failure fails the whole call and nothing is cached.
/// Values pass through 32-bit storage so cache hits and misses agree bitwise.
inline EmbeddingMatrix fetch_embeddings(const ProviderConfig& cfg, std::span<const LexicalItem> items,
                                        const EmbeddingCache& cache, const Transport& transport = {}) {
  cfg.validate();
  if (items.empty()) throw EmbedError(EmbedError::Kind::InvalidConfig, "fetch_embeddings: no items");
  const std::string model = cfg.effective_model_id();

  std::vector<std::vector<float>> rows(items.size());
  std::vector<std::string> missing;               // unique texts, first-seen order
  std::map<std::string, std::size_t> missing_at;  // text -> index into `missing`
  std::vector<std::size_t> first_item;            // per missing text
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (auto hit = cache.get(model, items[i].text)) {
      rows[i] = std::move(*hit);
    } else if (missing_at.emplace(items[i].text, missing.size()).second) {
      missing.push_back(items[i].text);
      first_item.push_back(i);
    }
  }

  std::vector<std::vector<float>> fetched(missing.size());
  if (!missing.empty()) {
    if (cfg.kind == ProviderKind::mock) {
      std::vector<LexicalItem> subset;
      subset.reserve(missing.size());
      for (std::size_t m = 0; m < missing.size(); ++m) subset.push_back(items[first_item[m]]);
      Matrix mock = mock_embeddings(subset, cfg.mock_dim, cfg.mock_seed, model).values;
      if (cfg.mock_constant) {
        const Vector v = detail::seeded_unit_vector(detail::kMockTextTag, cfg.mock_seed, "", cfg.mock_dim);
        mock.rowwise() = v.transpose();
      }
      for (std::size_t m = 0; m < missing.size(); ++m) {
        fetched[m].resize(cfg.mock_dim);
        for (std::size_t k = 0; k < cfg.mock_dim; ++k) {
          fetched[m][k] = static_cast<float>(mock(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)));
        }
      }
    } else {
      if (!transport) throw EmbedError(EmbedError::Kind::InvalidConfig, "no HTTP transport available");
      const std::optional<std::string> token = detail::resolve_token(cfg);
      const std::size_t batches = (missing.size() + cfg.batch_size - 1) / cfg.batch_size;
      std::vector<std::exception_ptr> errors(batches);
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t b = next.fetch_add(1); b < batches; b = next.fetch_add(1)) {
          const std::size_t begin = b * cfg.batch_size;
          const std::size_t end = std::min(missing.size(), begin + cfg.batch_size);
          std::vector<std::string> texts(missing.begin() + static_cast<std::ptrdiff_t>(begin),
                                         missing.begin() + static_cast<std::ptrdiff_t>(end));
          try {
            auto got = detail::fetch_batch(cfg, texts, token, transport);
            for (std::size_t r = 0; r < got.size(); ++r) fetched[begin + r] = std::move(got[r]);
          } catch (...) {
            errors[b] = std::current_exception();
          }
        }
      };
      {
        std::vector<std::jthread> pool;
        const std::size_t workers = std::min(cfg.max_in_flight, batches);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
      }
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
  }

  // One dimension across cached rows and every fetched batch.
  std::optional<std::size_t> dim;
  auto check_dim = [&](std::size_t d, const std::string& where) {
    if (!dim) {
      dim = d;
    } else if (*dim != d) {
      throw EmbedError(EmbedError::Kind::DimensionMismatch, "embedding dimension " + std::to_string(d) + " from " + where +
                                                                " differs from " + std::to_string(*dim));
    }
  };
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!rows[i].empty()) check_dim(rows[i].size(), "cache");
  }
  for (std::size_t m = 0; m < fetched.size(); ++m) {
    check_dim(fetched[m].size(), "batch " + std::to_string(m / cfg.batch_size));
  }
  for (const auto& row : fetched) {
    for (float f : row) {
      if (!std::isfinite(f)) throw EmbedError(EmbedError::Kind::BadResponse, "provider returned a non-finite value");
    }
  }

  for (std::size_t m = 0; m < missing.size(); ++m) cache.put(model, missing[m], fetched[m]);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (rows[i].empty()) rows[i] = fetched[missing_at.at(items[i].text)];
  }

  EmbeddingMatrix out;
  out.model_id = model;
  out.values.resize(static_cast<Eigen::Index>(items.size()), static_cast<Eigen::Index>(*dim));
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t k = 0; k < *dim; ++k) out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return out;
}

}  // namespace semgeo
