#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semgeo/datasets/lexicon.hpp"

#ifndef SEMGEO_DEFAULT_DATA_DIR
#define SEMGEO_DEFAULT_DATA_DIR "data"
#endif

namespace semgeo {

/// A bundled dataset: one or more JSONL parts under the data directory,
/// with the per-row counts the bundle must reproduce.
struct DatasetDescriptor {
  std::string id;
  std::string description;
  std::vector<std::string> parts;  // file names relative to the data dir
  Manifest manifest;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [k, v] : manifest) n += v;
    return n;
  }
};

/// Data directory: $SEMGEO_DATA_DIR when set, else the compiled-in default.
inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SEMGEO_DATA_DIR"); env && *env) return env;
  return SEMGEO_DEFAULT_DATA_DIR;
}

inline const std::vector<DatasetDescriptor>& builtin_catalog() {
  static const std::vector<DatasetDescriptor> catalog = [] {
    std::vector<DatasetDescriptor> c;
    auto row = [&](std::string lang, std::string row_name, std::size_t count, std::string what) {
      c.push_back({lang + "_" + row_name, std::move(what), {lang + "_" + row_name + ".jsonl"}, {{row_name, count}}});
    };
    row("enu", "core", 278, "English core words over parallel semantic domains");
    row("enu", "network", 62, "English work/light derivational families");
    row("enu", "numbers", 92, "English numerals, number words and math terminology");
    row("enu", "emoji", 50, "Emoji paired with English glosses");
    row("chn", "core", 265, "Chinese core words over parallel semantic domains");
    row("chn", "network", 123, "Chinese 子-network compounds");
    row("chn", "numbers", 20, "Chinese numerals");
    row("chn", "emoji", 100, "Emoji paired with Chinese glosses");
    row("deu", "core", 265, "German core words over parallel semantic domains");
    row("deu", "network", 90, "German haus/arbeit compounds");
    row("deu", "numbers", 65, "German numerals, number words and math terminology");

    c.push_back({"enu", "English bundle", {"enu_core.jsonl", "enu_network.jsonl", "enu_numbers.jsonl", "enu_emoji.jsonl"},
                 {{"core", 278}, {"network", 62}, {"numbers", 92}, {"emoji", 50}}});
    c.push_back({"chn", "Chinese bundle", {"chn_core.jsonl", "chn_network.jsonl", "chn_numbers.jsonl", "chn_emoji.jsonl"},
                 {{"core", 265}, {"network", 123}, {"numbers", 20}, {"emoji", 100}}});
    c.push_back({"deu", "German bundle", {"deu_core.jsonl", "deu_network.jsonl", "deu_numbers.jsonl"},
                 {{"core", 265}, {"network", 90}, {"numbers", 65}}});
    c.push_back({"trilingual_sample", "Core words in English, Chinese and German",
                 {"enu_core.jsonl", "chn_core.jsonl", "deu_core.jsonl"}, {{"core", 808}}});
    c.push_back({"full", "All three language bundles",
                 {"enu_core.jsonl", "enu_network.jsonl", "enu_numbers.jsonl", "enu_emoji.jsonl",
                  "chn_core.jsonl", "chn_network.jsonl", "chn_numbers.jsonl", "chn_emoji.jsonl",
                  "deu_core.jsonl", "deu_network.jsonl", "deu_numbers.jsonl"},
                 {{"core", 808}, {"network", 275}, {"numbers", 177}, {"emoji", 150}}});
    c.push_back({"alphabets", "Letters and characters of six writing systems plus digits",
                 {"alphabets.jsonl"}, {{"alphabet", 240}}});
    c.push_back({"powers10", "Powers of ten from 1 to 100000000", {"powers10.jsonl"}, {{"numbers", 9}}});
    return c;
  }();
  return catalog;
}

inline std::optional<DatasetDescriptor> find_descriptor(std::string_view id) {
  for (const auto& d : builtin_catalog()) {
    if (d.id == id) return d;
  }
  return std::nullopt;
}

/// Loads every part, validates each against its own manifest, then
/// validates the union against the descriptor's manifest.
inline LexiconDataset load_builtin(const DatasetDescriptor& d,
                                   const std::filesystem::path& data_dir = default_data_dir()) {
  std::vector<LexiconDataset> parts;
  parts.reserve(d.parts.size());
  for (const auto& file : d.parts) parts.push_back(load_dataset(data_dir / file));
  LexiconDataset ds = concat(d.id, parts);
  check_manifest(ds.items, d.manifest);
  ds.manifest = d.manifest;
  return ds;
}

}  // namespace semgeo
