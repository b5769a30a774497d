#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "semgeo/datasets/lexicon.hpp"
#include "semgeo/diagnostics/report.hpp"
#include "semgeo/projection.hpp"
#include "semgeo/util/text.hpp"

namespace semgeo {

/// A projection as served and stored: inputs, items and coordinates.
struct ProjectionDoc {
  std::string id;
  std::string dataset_id;
  std::string model_id;
  std::string method;
  ParamRecord params;  // every effective parameter, including "dims"
  std::int64_t seed = 0;
  std::vector<LexicalItem> items;
  Matrix coords;
  double stress = 0.0;
  ParamRecord metadata;
  std::optional<DiagnosticsReport> diagnostics;

  bool operator==(const ProjectionDoc& o) const {
    return id == o.id && dataset_id == o.dataset_id && model_id == o.model_id && method == o.method && params == o.params &&
           seed == o.seed && items == o.items && coords.rows() == o.coords.rows() && coords.cols() == o.coords.cols() &&
           coords == o.coords && stress == o.stress && metadata == o.metadata && diagnostics == o.diagnostics;
  }
};

class DocError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sha256 of the compact JSON {dataset_id, method, model_id, params, seed}
/// with keys sorted at every level.
inline std::string projection_id(const std::string& dataset_id, const std::string& model_id, const std::string& method,
                                 const ParamRecord& params, std::int64_t seed) {
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : params) p[k] = v;
  const nlohmann::json key{{"dataset_id", dataset_id}, {"model_id", model_id}, {"method", method}, {"params", p}, {"seed", seed}};
  return sha256_hex(key.dump());
}

inline std::string projection_id(const ProjectionDoc& d) {
  return projection_id(d.dataset_id, d.model_id, d.method, d.params, d.seed);
}

inline ProjectionDoc make_doc(const std::string& dataset_id, std::vector<LexicalItem> items, const Projection& p) {
  if (static_cast<std::size_t>(p.coords.rows()) != items.size()) throw DocError("projection rows do not match the item count");
  ProjectionDoc d;
  d.dataset_id = dataset_id;
  d.model_id = p.model_id;
  d.method = p.method;
  d.params = p.params;
  d.params["dims"] = static_cast<double>(p.coords.cols());
  d.seed = p.seed;
  d.items = std::move(items);
  d.coords = p.coords;
  d.stress = p.stress;
  d.metadata = p.metadata;
  d.id = projection_id(d);
  return d;
}

inline nlohmann::ordered_json to_json(const ProjectionDoc& d) {
  nlohmann::ordered_json j;
  j["id"] = d.id;
  j["dataset_id"] = d.dataset_id;
  j["model_id"] = d.model_id;
  j["method"] = d.method;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : d.params) j["params"][k] = v;
  j["seed"] = d.seed;
  j["dims"] = d.coords.cols();
  j["items"] = nlohmann::ordered_json::array();
  for (const auto& it : d.items) j["items"].push_back(to_json(it));
  j["coords"] = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < d.coords.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < d.coords.cols(); ++c) row.push_back(d.coords(i, c));
    j["coords"].push_back(std::move(row));
  }
  j["stress"] = d.stress;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : d.metadata) j["metadata"][k] = v;
  if (d.diagnostics) j["diagnostics"] = to_json(*d.diagnostics);
  return j;
}

/// Structural check of a serialized doc. Returns the problems found;
/// empty means valid.
inline std::vector<std::string> schema_errors(const nlohmann::ordered_json& j) {
  std::vector<std::string> errs;
  if (!j.is_object()) return {"document is not an object"};
  auto need = [&](const char* key, auto&& pred, const char* what) {
    if (!j.contains(key)) {
      errs.push_back(std::string("missing '") + key + "'");
      return false;
    }
    if (!pred(j[key])) {
      errs.push_back(std::string("'") + key + "' must be " + what);
      return false;
    }
    return true;
  };
  const auto is_string = [](const auto& v) { return v.is_string(); };
  const auto is_number_map = [](const auto& v) {
    if (!v.is_object()) return false;
    for (const auto& [k, x] : v.items()) {
      if (!x.is_number() || !std::isfinite(x.template get<double>())) return false;
    }
    return true;
  };
  const bool id_ok = need("id", [](const auto& v) { return v.is_string() && v.template get<std::string>().size() == 64; }, "a 64-char hex string");
  const bool ds_ok = need("dataset_id", is_string, "a string");
  const bool model_ok = need("model_id", is_string, "a string");
  const bool method_ok = need("method", is_string, "a string");
  const bool params_ok = need("params", is_number_map, "an object of finite numbers");
  const bool seed_ok = need("seed", [](const auto& v) { return v.is_number_integer(); }, "an integer");
  const bool dims_ok = need("dims", [](const auto& v) { return v.is_number_integer() && (v == 2 || v == 3); }, "2 or 3");
  need("stress", [](const auto& v) { return v.is_number() && std::isfinite(v.template get<double>()); }, "a finite number");
  need("metadata", is_number_map, "an object of finite numbers");
  std::size_t n_items = 0;
  if (need("items", [](const auto& v) { return v.is_array(); }, "an array")) {
    n_items = j["items"].size();
    for (std::size_t i = 0; i < n_items; ++i) {
      try {
        (void)item_from_json(nlohmann::json::parse(j["items"][i].dump()));
      } catch (const std::exception& e) {
        errs.push_back("items[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  if (need("coords", [](const auto& v) { return v.is_array(); }, "an array")) {
    const auto& coords = j["coords"];
    if (coords.size() != n_items) errs.push_back("coords has " + std::to_string(coords.size()) + " rows for " + std::to_string(n_items) + " items");
    const std::size_t dims = dims_ok ? j["dims"].get<std::size_t>() : 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const auto& row = coords[i];
      bool ok = row.is_array() && (!dims_ok || row.size() == dims);
      if (ok) {
        for (const auto& x : row) ok = ok && x.is_number() && std::isfinite(x.get<double>());
      }
      if (!ok) {
        errs.push_back("coords[" + std::to_string(i) + "] is not a finite row of length " + std::to_string(dims));
        break;
      }
    }
  }
  if (params_ok && dims_ok && (!j["params"].contains("dims") || j["params"]["dims"].get<double>() != j["dims"].get<double>())) {
    errs.push_back("params.dims must equal dims");
  }
  if (j.contains("diagnostics")) {
    const auto& d = j["diagnostics"];
    if (!d.is_object() || !d.contains("scores") || !d.contains("flags") || !d.contains("thresholds")) {
      errs.push_back("diagnostics must hold scores, flags and thresholds");
    }
  }
  if (id_ok && ds_ok && model_ok && method_ok && params_ok && seed_ok) {
    ParamRecord params;
    for (const auto& [k, v] : j["params"].items()) params[k] = v.get<double>();
    const std::string expect = projection_id(j["dataset_id"].get<std::string>(), j["model_id"].get<std::string>(),
                                             j["method"].get<std::string>(), params, j["seed"].get<std::int64_t>());
    if (j["id"].get<std::string>() != expect) errs.push_back("id does not match the hash of its inputs");
  }
  return errs;
}

inline ProjectionDoc doc_from_json(const nlohmann::ordered_json& j) {
  if (auto errs = schema_errors(j); !errs.empty()) throw DocError("invalid projection doc: " + errs.front());
  ProjectionDoc d;
  d.id = j["id"].get<std::string>();
  d.dataset_id = j["dataset_id"].get<std::string>();
  d.model_id = j["model_id"].get<std::string>();
  d.method = j["method"].get<std::string>();
  for (const auto& [k, v] : j["params"].items()) d.params[k] = v.get<double>();
  d.seed = j["seed"].get<std::int64_t>();
  for (const auto& it : j["items"]) d.items.push_back(item_from_json(nlohmann::json::parse(it.dump())));
  const auto dims = j["dims"].get<Eigen::Index>();
  d.coords.resize(static_cast<Eigen::Index>(d.items.size()), dims);
  for (Eigen::Index i = 0; i < d.coords.rows(); ++i) {
    for (Eigen::Index c = 0; c < dims; ++c) d.coords(i, c) = j["coords"][static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
  }
  d.stress = j["stress"].get<double>();
  for (const auto& [k, v] : j["metadata"].items()) d.metadata[k] = v.get<double>();
  if (j.contains("diagnostics")) d.diagnostics = report_from_json(j["diagnostics"]);
  return d;
}

inline ProjectionDoc parse_doc(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DocError(std::string("projection doc is not JSON: ") + e.what());
  }
  return doc_from_json(j);
}

}  // namespace semgeo
