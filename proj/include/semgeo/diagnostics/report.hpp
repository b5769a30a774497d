#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>

#include "json.hpp"
#include "semgeo/datasets/lexicon.hpp"
#include "semgeo/diagnostics/metrics.hpp"

namespace semgeo {

/// Scores for one projection. Every flag is derived from scores by a
/// threshold listed in `thresholds`.
struct DiagnosticsReport {
  std::string projection_id;
  std::map<std::string, double> scores;
  std::map<std::string, bool> flags;
  std::map<std::string, double> thresholds;
  std::map<std::string, std::string> skipped;  // metric -> reason
  std::map<std::string, std::map<std::string, double>> per_category;

  bool operator==(const DiagnosticsReport&) const = default;
};

inline std::map<std::string, double> default_thresholds() {
  return {{"spiral_sweep", kSpiralSweepGate},
          {"collapse_effective_rank", kCollapseRankThreshold},
          {"collapse_duplicate_fraction", kCollapseDuplicateThreshold},
          {"duplicate_radius", kDuplicateRadius},
          {"modality_separated", kModalitySeparatedThreshold}};
}

/// Categories treated as morphological families for branching.
inline bool is_family_category(const std::string& category) { return category_has_prefix(category, "network"); }

/// Runs every applicable metric. A metric whose preconditions fail is
/// recorded in `skipped` with the reason instead of failing the report.
inline DiagnosticsReport diagnose(const Matrix& coords, std::span<const LexicalItem> items, std::string projection_id = {}) {
  detail::check_aligned(coords, items);
  DiagnosticsReport r;
  r.projection_id = std::move(projection_id);
  r.thresholds = default_thresholds();
  auto guard = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const DiagnosticsError& e) {
      r.skipped[name] = e.what();
    }
  };

  guard("clustering_score", [&] { r.scores["clustering_score"] = clustering_score(coords, items); });

  guard("branching_score", [&] {
    std::map<std::string, std::vector<std::size_t>> families;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].level == Level::word && is_family_category(items[i].category)) families[items[i].category].push_back(i);
    }
    std::map<std::string, double> per;
    for (const auto& [family, rows] : families) {
      if (rows.size() >= 3) per[family] = branching_score(detail::select_rows(coords, rows));
    }
    if (per.empty()) throw DiagnosticsError(DiagnosticsError::Kind::TooFewPoints, "no morphological family with at least 3 words");
    double sum = 0.0;
    for (const auto& [family, v] : per) sum += v;
    r.scores["branching_score"] = sum / static_cast<double>(per.size());
    r.per_category["branching_score"] = std::move(per);
  });

  guard("spiral_score", [&] {
    std::map<std::string, double> per;
    for (const auto& [category, seq] : ordinal_sequences(items)) {
      if (seq.rows.size() >= 5) per[category] = spiral_score(coords, seq);
    }
    if (per.empty()) throw DiagnosticsError(DiagnosticsError::Kind::TooFewPoints, "no ordinal sequence with at least 5 items");
    double sum = 0.0;
    for (const auto& [category, v] : per) sum += v;
    r.scores["spiral_score"] = sum / static_cast<double>(per.size());
    r.per_category["spiral_score"] = std::move(per);
  });

  guard("collapse", [&] {
    const CollapseResult c = collapse_score(coords);
    r.scores["effective_rank"] = c.effective_rank;
    r.scores["duplicate_fraction"] = c.duplicate_fraction;
    r.flags["collapsed"] = c.collapsed;
  });

  guard("script_separation", [&] {
    auto per = script_separation(coords, items);
    double sum = 0.0;
    for (const auto& [pair, v] : per) sum += v;
    r.scores["script_separation"] = sum / static_cast<double>(per.size());
    r.per_category["script_separation"] = std::move(per);
  });

  guard("modality_integration", [&] {
    const ModalityResult m = modality_integration_score(coords, items);
    r.scores["modality_integration"] = m.ratio;
    r.flags["modality_separated"] = m.separated;
  });

  for (auto it = r.scores.begin(); it != r.scores.end();) {
    if (!std::isfinite(it->second)) {
      r.skipped[it->first] = "non-finite value";
      it = r.scores.erase(it);
    } else {
      ++it;
    }
  }
  return r;
}

inline nlohmann::ordered_json to_json(const DiagnosticsReport& r) {
  nlohmann::ordered_json j;
  j["projection_id"] = r.projection_id;
  j["scores"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.scores) j["scores"][k] = v;
  j["flags"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.flags) j["flags"][k] = v;
  j["thresholds"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.thresholds) j["thresholds"][k] = v;
  j["skipped"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.skipped) j["skipped"][k] = v;
  j["per_category"] = nlohmann::ordered_json::object();
  for (const auto& [metric, per] : r.per_category) {
    auto& slot = j["per_category"][metric] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : per) slot[k] = v;
  }
  return j;
}

inline DiagnosticsReport report_from_json(const nlohmann::ordered_json& j) {
  DiagnosticsReport r;
  r.projection_id = j.at("projection_id").get<std::string>();
  for (const auto& [k, v] : j.at("scores").items()) r.scores[k] = v.get<double>();
  for (const auto& [k, v] : j.at("flags").items()) r.flags[k] = v.get<bool>();
  for (const auto& [k, v] : j.at("thresholds").items()) r.thresholds[k] = v.get<double>();
  if (j.contains("skipped")) {
    for (const auto& [k, v] : j.at("skipped").items()) r.skipped[k] = v.get<std::string>();
  }
  if (j.contains("per_category")) {
    for (const auto& [metric, per] : j.at("per_category").items()) {
      for (const auto& [k, v] : per.items()) r.per_category[metric][k] = v.get<double>();
    }
  }
  return r;
}

}  // namespace semgeo
