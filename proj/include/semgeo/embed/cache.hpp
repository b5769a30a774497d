#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "semgeo/util/text.hpp"

namespace semgeo {

/// Content-addressed embedding cache.
///
/// Layout: <root>/<model_id>/<hex sha256 of NFC text>.vec, where each file
/// holds an 8-byte little-endian dimension followed by that many
/// little-endian IEEE-754 floats. Writes go to a temporary file that is
/// renamed into place, so concurrent writers of the same entry are safe.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  std::filesystem::path path_for(std::string_view model_id, std::string_view text) const {
    return root_ / model_directory(model_id) / (sha256_hex(nfc(text)) + ".vec");
  }

  /// Missing or truncated entries read as a miss.
  std::optional<std::vector<float>> get(std::string_view model_id, std::string_view text) const {
    std::ifstream in(path_for(model_id, text), std::ios::binary);
    if (!in) return std::nullopt;
    unsigned char header[8];
    if (!in.read(reinterpret_cast<char*>(header), sizeof header)) return std::nullopt;
    std::uint64_t dim = 0;
    for (int b = 7; b >= 0; --b) dim = (dim << 8) | header[b];
    if (dim == 0 || dim > (1u << 24)) return std::nullopt;
    std::vector<unsigned char> bytes(dim * 4);
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) return std::nullopt;
    if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
    std::vector<float> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) | static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8 |
                              static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16 |
                              static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24;
      out[i] = std::bit_cast<float>(u);
    }
    return out;
  }

  void put(std::string_view model_id, std::string_view text, std::span<const float> values) const {
    const std::filesystem::path target = path_for(model_id, text);
    std::filesystem::create_directories(target.parent_path());
    std::vector<unsigned char> bytes;
    bytes.reserve(8 + values.size() * 4);
    const std::uint64_t dim = values.size();
    for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<unsigned char>(dim >> (8 * b)));
    for (float f : values) {
      const auto u = std::bit_cast<std::uint32_t>(f);
      for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<unsigned char>(u >> (8 * b)));
    }
    const std::filesystem::path tmp = target.string() + ".tmp." + random_suffix();
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw std::runtime_error("cache: short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("cache: cannot publish " + target.string());
    }
  }

  /// Directory name for a model id: path-unsafe characters become '_'
  /// and '.'/'..' segments are neutralized.
  static std::string model_directory(std::string_view model_id) {
    std::string out;
    std::string segment;
    auto flush = [&] {
      if (segment.empty() || segment == "." || segment == "..") segment = "_" + segment;
      if (!out.empty()) out.push_back('/');
      out += segment;
      segment.clear();
    };
    for (char c : model_id) {
      if (c == '/') {
        flush();
        continue;
      }
      const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '-' || c == '_';
      segment.push_back(safe ? c : '_');
    }
    flush();
    return out;
  }

 private:
  static std::string random_suffix() {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    return std::to_string(rng());
  }

  std::filesystem::path root_;
};

}  // namespace semgeo
