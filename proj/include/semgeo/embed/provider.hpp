#pragma once

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semgeo/embed/embedding_matrix.hpp"

namespace semgeo {

enum class ProviderKind { http_openai_style, http_ollama_style, mock };

inline std::string_view to_string(ProviderKind k) {
  switch (k) {
    case ProviderKind::http_openai_style: return "http_openai_style";
    case ProviderKind::http_ollama_style: return "http_ollama_style";
    case ProviderKind::mock: return "mock";
  }
  return "mock";
}

/// Where embeddings come from. The two HTTP dialects cover hosted model
/// APIs, API aggregators and local daemons; `mock` is the offline double.
struct ProviderConfig {
  ProviderKind kind = ProviderKind::mock;
  std::string base_url;  // required unless mock
  std::string model_id = "mock";
  std::string auth_env;  // name of the variable holding a bearer token
  std::size_t batch_size = 32;
  int max_retries = 3;
  double timeout_s = 30.0;
  std::size_t max_in_flight = 4;
  double backoff_base_s = 0.5;
  // mock only
  std::size_t mock_dim = 64;
  std::int64_t mock_seed = 0;
  bool mock_constant = false;  // every item gets the same vector

  void validate() const {
    if (batch_size < 1) throw EmbedError(EmbedError::Kind::InvalidConfig, "batch_size must be >= 1");
    if (max_retries < 0 || max_retries > 10) throw EmbedError(EmbedError::Kind::InvalidConfig, "max_retries must be in [0, 10]");
    if (!(timeout_s > 0)) throw EmbedError(EmbedError::Kind::InvalidConfig, "timeout must be positive");
    if (max_in_flight < 1) throw EmbedError(EmbedError::Kind::InvalidConfig, "max_in_flight must be >= 1");
    if (model_id.empty()) throw EmbedError(EmbedError::Kind::InvalidConfig, "model_id is required");
    if (kind != ProviderKind::mock && base_url.empty()) {
      throw EmbedError(EmbedError::Kind::InvalidConfig, "base_url is required for HTTP providers");
    }
    if (kind == ProviderKind::mock && mock_dim < 2) throw EmbedError(EmbedError::Kind::InvalidConfig, "mock_dim must be >= 2");
  }

  /// Model id used for caching and provenance. Mock variants are spelled
  /// out so that differently seeded mocks never share cache entries.
  std::string effective_model_id() const {
    if (kind != ProviderKind::mock) return model_id;
    std::string id = model_id + "@mock-d" + std::to_string(mock_dim) + "-s" + std::to_string(mock_seed);
    if (mock_constant) id += "-const";
    return id;
  }
};

inline nlohmann::json to_json(const ProviderConfig& c) {
  nlohmann::json j{{"provider_kind", std::string(to_string(c.kind))},
                   {"model_id", c.model_id},
                   {"batch_size", c.batch_size},
                   {"max_retries", c.max_retries},
                   {"timeout", c.timeout_s},
                   {"max_in_flight", c.max_in_flight},
                   {"backoff_base", c.backoff_base_s}};
  if (!c.base_url.empty()) j["base_url"] = c.base_url;
  if (!c.auth_env.empty()) j["auth_env"] = c.auth_env;
  if (c.kind == ProviderKind::mock) {
    j["mock_dim"] = c.mock_dim;
    j["mock_seed"] = c.mock_seed;
    j["mock_constant"] = c.mock_constant;
  }
  return j;
}

inline ProviderConfig provider_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw EmbedError(EmbedError::Kind::InvalidConfig, "provider config must be a JSON object");
  ProviderConfig c;
  try {
    const std::string kind = j.value("provider_kind", std::string("mock"));
    if (kind == "http_openai_style") {
      c.kind = ProviderKind::http_openai_style;
    } else if (kind == "http_ollama_style") {
      c.kind = ProviderKind::http_ollama_style;
    } else if (kind == "mock") {
      c.kind = ProviderKind::mock;
    } else {
      throw EmbedError(EmbedError::Kind::InvalidConfig, "unknown provider_kind '" + kind + "'");
    }
    c.base_url = j.value("base_url", std::string());
    c.model_id = j.value("model_id", c.model_id);
    c.auth_env = j.value("auth_env", std::string());
    const auto batch = j.value("batch_size", static_cast<std::int64_t>(c.batch_size));
    if (batch < 1) throw EmbedError(EmbedError::Kind::InvalidConfig, "batch_size must be >= 1");
    c.batch_size = static_cast<std::size_t>(batch);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.timeout_s = j.value("timeout", c.timeout_s);
    const auto in_flight = j.value("max_in_flight", static_cast<std::int64_t>(c.max_in_flight));
    if (in_flight < 1) throw EmbedError(EmbedError::Kind::InvalidConfig, "max_in_flight must be >= 1");
    c.max_in_flight = static_cast<std::size_t>(in_flight);
    c.backoff_base_s = j.value("backoff_base", c.backoff_base_s);
    const auto dim = j.value("mock_dim", static_cast<std::int64_t>(c.mock_dim));
    if (dim < 2) throw EmbedError(EmbedError::Kind::InvalidConfig, "mock_dim must be >= 2");
    c.mock_dim = static_cast<std::size_t>(dim);
    c.mock_seed = j.value("mock_seed", c.mock_seed);
    c.mock_constant = j.value("mock_constant", c.mock_constant);
  } catch (const nlohmann::json::exception& e) {
    throw EmbedError(EmbedError::Kind::InvalidConfig, std::string("provider config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ProviderConfig load_provider_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EmbedError(EmbedError::Kind::InvalidConfig, "cannot open provider config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw EmbedError(EmbedError::Kind::InvalidConfig, "provider config " + path + ": " + e.what());
  }
  return provider_from_json(j);
}

// ------------------------------------------------------------------ wire

struct HttpRequest {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string path;      // appended to base_url
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
  double timeout_s = 30.0;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Raised by a transport when no HTTP response was obtained.
class TransportError : public std::runtime_error {
 public:
  TransportError(std::string message, bool timed_out) : std::runtime_error(std::move(message)), timed_out_(timed_out) {}
  bool timed_out() const { return timed_out_; }

 private:
  bool timed_out_;
};

using Transport = std::function<HttpResponse(const HttpRequest&)>;

/// Request for one batch in the provider's dialect.
///   openai: POST <base>/embeddings  {"model": id, "input": [texts]}
///   ollama: POST <base>/api/embed   {"model": id, "input": [texts]}
inline HttpRequest build_embedding_request(const ProviderConfig& cfg, const std::vector<std::string>& texts,
                                           const std::optional<std::string>& token) {
  HttpRequest req;
  req.base_url = cfg.base_url;
  req.path = cfg.kind == ProviderKind::http_ollama_style ? "/api/embed" : "/embeddings";
  req.body = nlohmann::json{{"model", cfg.model_id}, {"input", texts}}.dump();
  req.headers.emplace_back("Content-Type", "application/json");
  if (token) req.headers.emplace_back("Authorization", "Bearer " + *token);
  req.timeout_s = cfg.timeout_s;
  return req;
}

/// Parses a batch response; rows come back in request order.
///   openai: {"data": [{"index": i, "embedding": [...]}, ...]}
///   ollama: {"embeddings": [[...], ...]}
inline std::vector<std::vector<float>> parse_embedding_response(const ProviderConfig& cfg, const std::string& body,
                                                                std::size_t expected_rows) {
  auto bad = [](const std::string& why) { return EmbedError(EmbedError::Kind::BadResponse, "provider response: " + why); };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  }
  std::vector<std::vector<float>> rows(expected_rows);
  std::vector<bool> filled(expected_rows, false);
  auto read_vector = [&](const nlohmann::json& v) {
    if (!v.is_array() || v.empty()) throw bad("embedding is not a non-empty array");
    std::vector<float> out;
    out.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number()) throw bad("embedding contains a non-number");
      out.push_back(static_cast<float>(x.get<double>()));
    }
    return out;
  };
  if (cfg.kind == ProviderKind::http_ollama_style) {
    auto it = j.find("embeddings");
    if (it == j.end() || !it->is_array()) throw bad("missing 'embeddings'");
    if (it->size() != expected_rows) throw bad("expected " + std::to_string(expected_rows) + " rows");
    for (std::size_t i = 0; i < expected_rows; ++i) rows[i] = read_vector((*it)[i]);
  } else {
    auto it = j.find("data");
    if (it == j.end() || !it->is_array()) throw bad("missing 'data'");
    if (it->size() != expected_rows) throw bad("expected " + std::to_string(expected_rows) + " rows");
    for (std::size_t pos = 0; pos < it->size(); ++pos) {
      const auto& entry = (*it)[pos];
      if (!entry.is_object()) throw bad("data entry is not an object");
      const std::size_t index = entry.contains("index") ? entry["index"].get<std::size_t>() : pos;
      if (index >= expected_rows || filled[index]) throw bad("bad or repeated index");
      rows[index] = read_vector(entry.value("embedding", nlohmann::json()));
      filled[index] = true;
    }
  }
  return rows;
}

}  // namespace semgeo
