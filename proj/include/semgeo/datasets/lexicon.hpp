#pragma once

#include "json.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semgeo/util/text.hpp"

namespace semgeo {

enum class Level { subchar, character, word, number, emoji, sentence };

inline std::string_view to_string(Level level) {
  switch (level) {
    case Level::subchar: return "subchar";
    case Level::character: return "char";
    case Level::word: return "word";
    case Level::number: return "number";
    case Level::emoji: return "emoji";
    case Level::sentence: return "sentence";
  }
  return "word";
}

inline std::optional<Level> parse_level(std::string_view s) {
  if (s == "subchar") return Level::subchar;
  if (s == "char") return Level::character;
  if (s == "word") return Level::word;
  if (s == "number") return Level::number;
  if (s == "emoji") return Level::emoji;
  if (s == "sentence") return Level::sentence;
  return std::nullopt;
}

inline bool is_known_lang(std::string_view lang) {
  static constexpr std::string_view kLangs[] = {"enu", "chn", "deu", "jpn", "kor", "ara", "mixed"};
  return std::find(std::begin(kLangs), std::end(kLangs), lang) != std::end(kLangs);
}

/// One text unit of a lexicon.
struct LexicalItem {
  std::string text;  // NFC-normalized UTF-8, non-empty
  std::string lang;
  std::string category;  // dot-separated, e.g. "core.family"
  Level level = Level::word;
  std::optional<std::int64_t> order;
  std::optional<std::string> pair_id;

  bool operator==(const LexicalItem&) const = default;
};

/// Expected item counts keyed by category prefix (e.g. "core" covers
/// "core.family", "core.body", ...).
using Manifest = std::map<std::string, std::size_t>;

struct LexiconDataset {
  std::string id;
  std::vector<LexicalItem> items;
  std::optional<Manifest> manifest;

  std::size_t size() const { return items.size(); }
  bool operator==(const LexiconDataset&) const = default;
};

class DatasetError : public std::runtime_error {
 public:
  enum class Kind { MalformedLine, DuplicateItem, DuplicateOrder, ManifestMismatch, DanglingPair, Empty, Io };

  DatasetError(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

  static DatasetError malformed(std::size_t line, const std::string& why) {
    DatasetError e(Kind::MalformedLine, "malformed line " + std::to_string(line) + ": " + why);
    e.line_ = line;
    return e;
  }
  static DatasetError duplicate(const LexicalItem& it) {
    DatasetError e(Kind::DuplicateItem, "duplicate item (" + it.text + ", " + it.lang + ", " +
                                            std::string(to_string(it.level)) + ")");
    e.key_ = it.text;
    return e;
  }
  static DatasetError duplicate_order(const std::string& category, const std::string& lang, std::int64_t order) {
    DatasetError e(Kind::DuplicateOrder,
                   "order " + std::to_string(order) + " repeated in category " + category + " (" + lang + ")");
    e.key_ = category;
    return e;
  }
  static DatasetError manifest_mismatch(const std::string& category, std::size_t expected,
                                        std::size_t actual) {
    DatasetError e(Kind::ManifestMismatch, "manifest mismatch for '" + category + "': expected " +
                                               std::to_string(expected) + ", found " +
                                               std::to_string(actual));
    e.key_ = category;
    e.expected_ = expected;
    e.actual_ = actual;
    return e;
  }
  static DatasetError dangling_pair(const std::string& pair_id) {
    DatasetError e(Kind::DanglingPair, "pair_id '" + pair_id + "' does not link exactly two items");
    e.key_ = pair_id;
    return e;
  }

 private:
  Kind kind_;
  std::size_t line_ = 0;
  std::string key_;
  std::size_t expected_ = 0;
  std::size_t actual_ = 0;
};

/// True when `category` equals `prefix` or continues it after a dot.
inline bool category_has_prefix(std::string_view category, std::string_view prefix) {
  if (prefix.empty()) return true;
  if (category.size() < prefix.size() || category.substr(0, prefix.size()) != prefix) return false;
  return category.size() == prefix.size() || category[prefix.size()] == '.';
}

inline std::size_t count_with_prefix(const std::vector<LexicalItem>& items, std::string_view prefix) {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [&](const LexicalItem& it) {
    return category_has_prefix(it.category, prefix);
  }));
}

inline void check_manifest(const std::vector<LexicalItem>& items, const Manifest& manifest) {
  std::size_t total = 0;
  for (const auto& [category, expected] : manifest) {
    const std::size_t actual = count_with_prefix(items, category);
    if (actual != expected) throw DatasetError::manifest_mismatch(category, expected, actual);
    total += expected;
  }
  if (total != items.size()) throw DatasetError::manifest_mismatch("*", total, items.size());
}

/// Checks every dataset invariant; throws DatasetError on the first violation.
inline void validate(const LexiconDataset& ds) {
  if (ds.items.empty()) throw DatasetError(DatasetError::Kind::Empty, "dataset '" + ds.id + "' has no items");
  std::map<std::tuple<std::string, std::string, Level>, std::size_t> seen;
  std::map<std::pair<std::string, std::string>, std::map<std::int64_t, std::size_t>> orders;
  std::map<std::string, std::vector<std::size_t>> pairs;
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    const LexicalItem& it = ds.items[i];
    if (it.text.empty()) throw DatasetError::malformed(i + 1, "empty text");
    if (!seen.emplace(std::tuple{it.text, it.lang, it.level}, i).second) throw DatasetError::duplicate(it);
    if (it.order && !orders[{it.lang, it.category}].emplace(*it.order, i).second) {
      throw DatasetError::duplicate_order(it.category, it.lang, *it.order);
    }
    if (it.pair_id) pairs[*it.pair_id].push_back(i);
  }
  for (const auto& [pid, members] : pairs) {
    if (members.size() != 2) throw DatasetError::dangling_pair(pid);
    const LexicalItem& a = ds.items[members[0]];
    const LexicalItem& b = ds.items[members[1]];
    if (a.level == b.level && a.lang == b.lang) throw DatasetError::dangling_pair(pid);
  }
  if (ds.manifest) check_manifest(ds.items, *ds.manifest);
}

namespace detail {

inline LexicalItem item_from_json(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) throw DatasetError::malformed(line, "not a JSON object");
  auto str = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw DatasetError::malformed(line, std::string("missing or non-string '") + key + "'");
    }
    return it->get<std::string>();
  };
  LexicalItem item;
  item.text = nfc(str("text"));
  if (item.text.empty()) throw DatasetError::malformed(line, "empty text");
  item.lang = str("lang");
  if (!is_known_lang(item.lang)) throw DatasetError::malformed(line, "unknown lang '" + item.lang + "'");
  item.category = str("category");
  if (item.category.empty()) throw DatasetError::malformed(line, "empty category");
  const std::string level = str("level");
  auto parsed = parse_level(level);
  if (!parsed) throw DatasetError::malformed(line, "unknown level '" + level + "'");
  item.level = *parsed;
  if (auto it = j.find("order"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw DatasetError::malformed(line, "order must be an integer or null");
    item.order = it->get<std::int64_t>();
  }
  if (auto it = j.find("pair_id"); it != j.end() && !it->is_null()) {
    if (!it->is_string() || it->get<std::string>().empty()) {
      throw DatasetError::malformed(line, "pair_id must be a non-empty string or null");
    }
    item.pair_id = it->get<std::string>();
  }
  return item;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const LexicalItem& it) {
  nlohmann::ordered_json j;
  j["text"] = it.text;
  j["lang"] = it.lang;
  j["category"] = it.category;
  j["level"] = std::string(to_string(it.level));
  j["order"] = it.order ? nlohmann::ordered_json(*it.order) : nlohmann::ordered_json(nullptr);
  j["pair_id"] = it.pair_id ? nlohmann::ordered_json(*it.pair_id) : nlohmann::ordered_json(nullptr);
  return j;
}

inline LexicalItem item_from_json(const nlohmann::json& j) { return detail::item_from_json(j, 0); }

/// Parses the JSON Lines dataset format. Blank lines are skipped.
inline LexiconDataset parse_dataset(std::istream& in, std::string id,
                                    const std::optional<Manifest>& expected_manifest = std::nullopt) {
  LexiconDataset ds;
  ds.id = std::move(id);
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError::malformed(lineno, e.what());
    }
    if (first_content && j.is_object() && j.contains("manifest")) {
      first_content = false;
      const auto& m = j["manifest"];
      if (!m.is_object()) throw DatasetError::malformed(lineno, "manifest must be an object");
      Manifest manifest;
      for (const auto& [k, v] : m.items()) {
        if (!v.is_number_unsigned()) throw DatasetError::malformed(lineno, "manifest counts must be non-negative integers");
        manifest[k] = v.get<std::size_t>();
      }
      ds.manifest = std::move(manifest);
      continue;
    }
    first_content = false;
    ds.items.push_back(detail::item_from_json(j, lineno));
  }
  validate(ds);
  if (expected_manifest) check_manifest(ds.items, *expected_manifest);
  return ds;
}

/// Loads and validates a dataset file; the dataset id is the file stem.
inline LexiconDataset load_dataset(const std::filesystem::path& path,
                                   const std::optional<Manifest>& expected_manifest = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetError::Kind::Io, "cannot open dataset file " + path.string());
  return parse_dataset(in, path.stem().string(), expected_manifest);
}

/// Canonical writer: optional manifest line, then one item per line with
/// keys in schema order, LF endings.
inline void write_dataset(const LexiconDataset& ds, std::ostream& out) {
  if (ds.manifest) {
    nlohmann::ordered_json m;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : *ds.manifest) counts[k] = v;
    m["manifest"] = counts;
    out << m.dump() << '\n';
  }
  for (const auto& it : ds.items) out << to_json(it).dump() << '\n';
}

inline void write_dataset(const LexiconDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(DatasetError::Kind::Io, "cannot write dataset file " + path.string());
  write_dataset(ds, out);
}

struct ItemFilter {
  std::optional<std::string> lang;
  std::optional<Level> level;
  std::optional<std::string> category_prefix;
};

/// Order-preserving subset; the result carries no manifest.
inline LexiconDataset filter_items(const LexiconDataset& ds, const ItemFilter& f) {
  LexiconDataset out;
  out.id = ds.id;
  for (const auto& it : ds.items) {
    if (f.lang && it.lang != *f.lang) continue;
    if (f.level && it.level != *f.level) continue;
    if (f.category_prefix && !category_has_prefix(it.category, *f.category_prefix)) continue;
    out.items.push_back(it);
  }
  return out;
}

/// Concatenates datasets; manifests are summed key-wise when all parts have one.
inline LexiconDataset concat(std::string id, const std::vector<LexiconDataset>& parts) {
  LexiconDataset out;
  out.id = std::move(id);
  bool all_manifests = !parts.empty();
  Manifest merged;
  for (const auto& p : parts) {
    out.items.insert(out.items.end(), p.items.begin(), p.items.end());
    if (!p.manifest) {
      all_manifests = false;
      continue;
    }
    for (const auto& [k, v] : *p.manifest) merged[k] += v;
  }
  if (all_manifests) out.manifest = std::move(merged);
  validate(out);
  return out;
}

}  // namespace semgeo
