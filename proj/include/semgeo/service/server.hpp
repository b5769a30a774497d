#pragma once

#include "semgeo/util/linalg.hpp"

#include "httplib.h"

#include <atomic>
#include <chrono>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "semgeo/embed/http_transport.hpp"
#include "semgeo/service/compute.hpp"

namespace semgeo {

struct ServiceConfig {
  std::filesystem::path data_dir = default_data_dir();
  std::filesystem::path cache_dir = ".semgeo-cache";
  Execution execution;
  Transport transport;
  std::size_t max_items = 3000;
  double time_cap_s = 120.0;
};

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {dataset_id, provider?, method?, params?, dims?, seed?}. `dims` may also
/// be given inside params.
inline ProjectionRequest parse_projection_body(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw BadRequest(std::string("body is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw BadRequest("body must be a JSON object");
  ProjectionRequest req;
  if (!j.contains("dataset_id") || !j["dataset_id"].is_string()) throw BadRequest("'dataset_id' (string) is required");
  req.dataset = j["dataset_id"].get<std::string>();
  if (j.contains("provider") && !j["provider"].is_null()) {
    try {
      req.provider = provider_from_json(j["provider"]);
    } catch (const EmbedError& e) {
      throw BadRequest(e.what());
    }
  }
  if (j.contains("method")) {
    if (!j["method"].is_string()) throw BadRequest("'method' must be a string");
    req.method.name = j["method"].get<std::string>();
  }
  if (j.contains("params") && !j["params"].is_null()) {
    if (!j["params"].is_object()) throw BadRequest("'params' must be an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (!v.is_number()) throw BadRequest("parameter '" + k + "' must be a number");
      if (k == "dims") {
        req.dims = static_cast<int>(v.get<double>());
        if (req.dims != v.get<double>()) throw BadRequest("dims must be 2 or 3");
      } else {
        req.method.params[k] = v.get<double>();
      }
    }
  }
  if (j.contains("dims")) {
    if (!j["dims"].is_number_integer()) throw BadRequest("'dims' must be 2 or 3");
    req.dims = j["dims"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw BadRequest("'seed' must be an integer");
    req.seed = j["seed"].get<std::int64_t>();
  }
  return req;
}

/// HTTP front end: dataset catalog, memoized projections, diagnostics.
class Service {
 public:
  explicit Service(ServiceConfig cfg) : cfg_(std::move(cfg)), memo_(cfg_.cache_dir / "projections") { routes(); }

  ~Service() {
    stop();
    std::lock_guard lock(background_mutex_);
    for (auto& job : background_) job.thread.join();
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to `port` (0 = any free port) and serves on a background thread.
  /// Returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    listener_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  /// Binds and serves on the calling thread until stopped.
  bool listen(const std::string& host, int port) { return server_.listen(host, port); }

  void stop() {
    server_.stop();
    if (listener_.joinable()) listener_.join();
  }

  /// Number of projections computed (memo misses) since start.
  std::size_t computations() const { return computations_.load(); }

  httplib::Server& http() { return server_; }

 private:
  static void send_json(httplib::Response& res, int status, const std::string& body) {
    res.status = status;
    res.set_content(body, "application/json; charset=utf-8");
  }

  static void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, nlohmann::json{{"error", message}, {"status", status}}.dump());
  }

  void routes() {
    server_.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server_.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server_.set_exception_handler([](const httplib::Request&, httplib::Response& res, const std::exception_ptr& ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      } catch (...) {
        send_error(res, 500, "internal error");
      }
    });

    server_.Get("/datasets", [](const httplib::Request&, httplib::Response& res) {
      nlohmann::ordered_json out = nlohmann::ordered_json::array();
      for (const auto& d : builtin_catalog()) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        for (const auto& [k, v] : d.manifest) m[k] = v;
        out.push_back({{"id", d.id}, {"description", d.description}, {"parts", d.parts}, {"manifest", m}, {"total", d.total()}});
      }
      send_json(res, 200, out.dump());
    });

    server_.Get(R"(/datasets/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const auto desc = find_descriptor(id);
      if (!desc) return send_error(res, 404, "unknown dataset '" + id + "'");
      const LexiconDataset ds = load_builtin(*desc, cfg_.data_dir);
      nlohmann::ordered_json out;
      out["id"] = ds.id;
      out["manifest"] = nlohmann::ordered_json::object();
      for (const auto& [k, v] : desc->manifest) out["manifest"][k] = v;
      out["items"] = nlohmann::ordered_json::array();
      for (const auto& it : ds.items) out["items"].push_back(to_json(it));
      send_json(res, 200, out.dump());
    });

    server_.Post("/projections", [this](const httplib::Request& req, httplib::Response& res) { post_projection(req, res); });

    server_.Get(R"(/projections/([0-9a-f]{64}))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      auto doc = memo_.get(id);
      if (!doc) return send_error(res, 404, "unknown projection '" + id + "'");
      send_json(res, 200, *doc);
    });

    server_.Get(R"(/projections/([0-9a-f]{64})/diagnostics)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      if (auto cached = memo_.get(id, ".diagnostics.json")) {
        res.set_header("X-Memo", "hit");
        return send_json(res, 200, *cached);
      }
      auto doc_text = memo_.get(id);
      if (!doc_text) return send_error(res, 404, "unknown projection '" + id + "'");
      const ProjectionDoc doc = parse_doc(*doc_text);
      const std::string body = to_json(diagnose(doc.coords, doc.items, doc.id)).dump();
      memo_.put(id, body, ".diagnostics.json");
      res.set_header("X-Memo", "miss");
      send_json(res, 200, body);
    });
  }

  void post_projection(const httplib::Request& http_req, httplib::Response& res) {
    ProjectionRequest req;
    std::string id;
    try {
      req = parse_projection_body(http_req.body);
      if (!find_descriptor(req.dataset)) return send_error(res, 404, "unknown dataset '" + req.dataset + "'");
      check_method_name(req.method.name);
      id = request_id(req);
    } catch (const BadRequest& e) {
      return send_error(res, 400, e.what());
    } catch (const GeometryError& e) {
      return send_error(res, e.kind() == GeometryError::Kind::UnimplementedMethod ? 422 : 400, e.what());
    } catch (const EmbedError& e) {
      return send_error(res, 400, e.what());
    }

    if (auto cached = memo_.get(id)) {
      res.set_header("X-Memo", "hit");
      return send_json(res, 200, *cached);
    }

    ComputeContext ctx;
    ctx.data_dir = cfg_.data_dir;
    ctx.cache_dir = cfg_.cache_dir;
    ctx.execution = cfg_.execution;
    ctx.transport = cfg_.transport ? cfg_.transport : http_transport();
    ctx.max_items = cfg_.max_items;

    // Runs on its own thread so the request can give up at the time cap;
    // a late result still lands in the memo store.
    auto task = std::make_shared<std::packaged_task<std::string()>>([this, req, ctx] {
      ++computations_;
      const ProjectionDoc doc = compute_projection(req, ctx);
      std::string body = to_json(doc).dump();
      memo_.put(doc.id, body);
      return body;
    });
    std::future<std::string> result = task->get_future();
    {
      std::lock_guard lock(background_mutex_);
      std::erase_if(background_, [](Job& job) {
        if (!job.done->load()) return false;
        job.thread.join();
        return true;
      });
      auto done = std::make_shared<std::atomic<bool>>(false);
      background_.push_back(Job{std::thread([task, done] {
                                  (*task)();
                                  done->store(true);
                                }),
                                done});
    }
    if (result.wait_for(std::chrono::duration<double>(cfg_.time_cap_s)) != std::future_status::ready) {
      return send_error(res, 422, "projection exceeded the " + std::to_string(cfg_.time_cap_s) + " s time cap");
    }
    try {
      std::string body = result.get();
      res.set_header("X-Memo", "miss");
      send_json(res, 200, body);
    } catch (const ItemCapExceeded& e) {
      send_error(res, 422, e.what());
    } catch (const GeometryError& e) {
      send_error(res, 422, e.what());
    } catch (const EmbedError& e) {
      send_error(res, e.kind() == EmbedError::Kind::InvalidConfig ? 400 : 502, e.what());
    }
  }

  ServiceConfig cfg_;
  MemoStore memo_;
  httplib::Server server_;
  std::thread listener_;
  std::atomic<std::size_t> computations_{0};
  struct Job {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::mutex background_mutex_;
  std::vector<Job> background_;
};

}  // namespace semgeo
