#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <thread>

#include "semgeo/datasets/catalog.hpp"
#include "semgeo/dr/dispatch.hpp"
#include "semgeo/embed/fetch.hpp"
#include "semgeo/embed/provider.hpp"
#include "semgeo/service/projection_doc.hpp"

namespace semgeo {

/// Everything that determines a projection.
struct ProjectionRequest {
  std::string dataset;  // catalog id or path to a .jsonl file
  ProviderConfig provider;
  DrMethod method;
  int dims = 2;
  std::int64_t seed = 0;
};

struct ComputeContext {
  std::filesystem::path data_dir = default_data_dir();
  std::filesystem::path cache_dir = ".semgeo-cache";
  Execution execution;
  Transport transport;  // HTTP providers only
  std::size_t max_items = 3000;
};

/// A catalog id loads the bundled dataset; anything else is a file path.
inline LexiconDataset resolve_dataset(const std::string& source, const std::filesystem::path& data_dir) {
  if (auto d = find_descriptor(source)) return load_builtin(*d, data_dir);
  return load_dataset(source);
}

/// Dataset id recorded in docs: the catalog id, or the file stem.
inline std::string dataset_id_of(const std::string& source) {
  if (find_descriptor(source)) return source;
  return std::filesystem::path(source).stem().string();
}

/// Doc id for a request without computing anything. Throws the same
/// method and parameter errors as the computation would.
inline std::string request_id(const ProjectionRequest& req) {
  check_out_dims(req.dims, req.method.name.c_str());
  ParamRecord params = resolve_params(req.method);
  params["dims"] = req.dims;
  req.provider.validate();
  return projection_id(dataset_id_of(req.dataset), req.provider.effective_model_id(), req.method.name, params, req.seed);
}

class ItemCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Embeds the dataset and projects it; the one code path behind both the
/// CLI and the service.
inline ProjectionDoc compute_projection(const ProjectionRequest& req, const ComputeContext& ctx) {
  check_method_name(req.method.name);
  (void)resolve_params(req.method);
  const LexiconDataset ds = resolve_dataset(req.dataset, ctx.data_dir);
  if (ds.items.size() > ctx.max_items) {
    throw ItemCapExceeded("dataset has " + std::to_string(ds.items.size()) + " items; the cap is " + std::to_string(ctx.max_items));
  }
  const EmbeddingCache cache(ctx.cache_dir / "embeddings");
  const EmbeddingMatrix m = fetch_embeddings(req.provider, ds.items, cache, ctx.transport);
  const Projection p = project(m, req.method, req.dims, req.seed, ctx.execution);
  return make_doc(dataset_id_of(req.dataset), ds.items, p);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a temporary file and rename so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

/// File-backed memo of serialized docs and diagnostics under
/// <root>/<id>.json and <root>/<id>.diagnostics.json.
class MemoStore {
 public:
  explicit MemoStore(std::filesystem::path root) : root_(std::move(root)) {}

  std::optional<std::string> get(const std::string& id, const char* suffix = ".json") const {
    std::shared_lock lock(mutex_);
    const auto path = root_ / (id + suffix);
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_file(path);
  }

  void put(const std::string& id, const std::string& body, const char* suffix = ".json") const {
    std::unique_lock lock(mutex_);
    write_file_atomic(root_ / (id + suffix), body);
  }

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
};

}  // namespace semgeo
