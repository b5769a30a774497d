#pragma once

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "semgeo/service/compute.hpp"
#include "semgeo/service/server.hpp"

namespace semgeo::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

namespace detail {

struct Common {
  std::string data_dir = default_data_dir().string();
  std::string cache_dir = ".semgeo-cache";
  std::size_t threads = 1;
};

inline void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--data-dir", c.data_dir, "Directory holding the bundled datasets");
  cmd->add_option("--cache-dir", c.cache_dir, "Embedding cache and memo store root");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

inline ProviderConfig load_provider(const std::string& path) {
  return path.empty() ? ProviderConfig{} : load_provider_config(path);
}

/// "key=value" pairs into a parameter record.
inline ParamRecord parse_params(const std::vector<std::string>& pairs) {
  ParamRecord out;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--param expects key=value, got '" + p + "'");
    const std::string key = p.substr(0, eq);
    const std::string value = p.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw std::invalid_argument("--param " + key + ": '" + value + "' is not a number");
    out[key] = v;
  }
  return out;
}

inline std::string fmt(const char* pattern, const std::string& name, double value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, name.c_str(), value);
  return buf;
}

inline void print_report(std::ostream& out, const DiagnosticsReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-32s %16s\n", "metric", "value");
  out << buf;
  for (const auto& [name, value] : r.scores) out << fmt("%-32s %16.6f\n", name, value);
  for (const auto& [name, flag] : r.flags) {
    std::snprintf(buf, sizeof buf, "%-32s %16s\n", name.c_str(), flag ? "true" : "false");
    out << buf;
  }
  for (const auto& [name, reason] : r.skipped) out << "skipped " << name << ": " << reason << '\n';
}

inline ProjectionDoc read_doc(const std::string& path) { return parse_doc(read_file(path)); }

}  // namespace detail

/// Entry point shared by the binary and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"semgeo: semantic geometry of lexical embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "semgeo 0.1.0");

  detail::Common common;
  std::string dataset, provider_path, method = "phate", out_path, json_path, host = "127.0.0.1";
  std::vector<std::string> param_pairs, doc_paths;
  int dims = 2, port = 8080;
  std::int64_t seed = 0;
  std::size_t max_items = 3000;
  double time_cap = 120.0;

  CLI::App* embed = app.add_subcommand("embed", "Fetch embeddings for a dataset into the cache");
  embed->add_option("--dataset", dataset, "Catalog id or .jsonl path")->required();
  embed->add_option("--provider-config", provider_path, "Provider config JSON (default: mock)");
  detail::add_common(embed, common);

  CLI::App* proj = app.add_subcommand("project", "Embed and project a dataset, writing a projection doc");
  proj->add_option("--dataset", dataset, "Catalog id or .jsonl path")->required();
  proj->add_option("--provider-config", provider_path, "Provider config JSON (default: mock)");
  proj->add_option("--method", method, "phate, pca, cmds, kpca, isomap, lle, spectral or tsne");
  proj->add_option("--param", param_pairs, "Method parameter key=value (repeatable)");
  proj->add_option("--dims", dims, "Output dimensions")->check(CLI::IsMember({2, 3}));
  proj->add_option("--seed", seed, "Random seed");
  proj->add_option("--out", out_path, "Output path (default: standard output)");
  detail::add_common(proj, common);

  CLI::App* diag = app.add_subcommand("diagnose", "Add a diagnostics report to a projection doc");
  diag->add_option("doc", out_path, "Projection doc path")->required();
  diag->add_option("--out", json_path, "Write the updated doc here instead of in place");

  CLI::App* cmp = app.add_subcommand("compare", "Compare diagnostics across projection docs");
  cmp->add_option("docs", doc_paths, "Projection doc paths")->required();
  cmp->add_option("--json", json_path, "Also write the comparison JSON to this path");

  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "Port (0 = any free port)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--max-items", max_items, "Largest dataset a request may project");
  serve->add_option("--time-cap", time_cap, "Seconds before a projection request gives up");
  detail::add_common(serve, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  ComputeContext ctx;
  ctx.data_dir = common.data_dir;
  ctx.cache_dir = common.cache_dir;
  ctx.execution.threads = common.threads;
  ctx.transport = http_transport();
  ctx.max_items = std::numeric_limits<std::size_t>::max();

  if (embed->parsed() || proj->parsed()) {
    ProjectionRequest req;
    LexiconDataset ds;
    try {
      req.dataset = dataset;
      req.provider = detail::load_provider(provider_path);
      ds = resolve_dataset(dataset, ctx.data_dir);
      if (proj->parsed()) {
        req.method.name = method;
        req.method.params = detail::parse_params(param_pairs);
        req.dims = dims;
        req.seed = seed;
        (void)request_id(req);  // method name and parameter checks
      }
    } catch (const std::exception& e) {
      err << "semgeo: " << e.what() << '\n';
      return kUsage;
    }
    try {
      if (embed->parsed()) {
        const EmbeddingCache cache(ctx.cache_dir / "embeddings");
        const EmbeddingMatrix m = fetch_embeddings(req.provider, ds.items, cache, ctx.transport);
        out << "embedded " << ds.id << ": " << m.rows() << " x " << m.dim() << " (" << m.model_id << ")\n";
        return kOk;
      }
      const ProjectionDoc doc = compute_projection(req, ctx);
      const std::string body = to_json(doc).dump();
      if (out_path.empty()) {
        out << body << '\n';
      } else {
        write_file_atomic(std::filesystem::absolute(out_path), body + "\n");
        err << "wrote " << doc.id << " (" << doc.coords.rows() << " x " << doc.coords.cols() << ") to " << out_path << '\n';
      }
      return kOk;
    } catch (const std::exception& e) {
      err << "semgeo: " << e.what() << '\n';
      return kFailure;
    }
  }

  if (diag->parsed()) {
    try {
      ProjectionDoc doc = detail::read_doc(out_path);
      doc.diagnostics = diagnose(doc.coords, doc.items, doc.id);
      write_file_atomic(std::filesystem::absolute(json_path.empty() ? out_path : json_path), to_json(doc).dump() + "\n");
      detail::print_report(out, *doc.diagnostics);
      return kOk;
    } catch (const std::exception& e) {
      err << "semgeo: " << e.what() << '\n';
      return kFailure;
    }
  }

  if (cmp->parsed()) {
    std::vector<ProjectionDoc> docs;
    try {
      for (const auto& p : doc_paths) docs.push_back(detail::read_doc(p));
    } catch (const std::exception& e) {
      err << "semgeo: " << e.what() << '\n';
      return kFailure;
    }
    for (const auto& d : docs) {
      if (d.dataset_id != docs.front().dataset_id) {
        err << "semgeo: docs cover different datasets ('" << docs.front().dataset_id << "' and '" << d.dataset_id << "')\n";
        return kUsage;
      }
    }
    std::set<std::string> metrics;
    std::vector<DiagnosticsReport> reports;
    for (const auto& d : docs) {
      reports.push_back(d.diagnostics ? *d.diagnostics : diagnose(d.coords, d.items, d.id));
      for (const auto& [name, v] : reports.back().scores) metrics.insert(name);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s %-10s %-28s", "doc", "method", "model");
    out << buf;
    for (const auto& m : metrics) {
      std::snprintf(buf, sizeof buf, " %20s", m.c_str());
      out << buf;
    }
    out << '\n';
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < docs.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%-14s %-10s %-28s", docs[i].id.substr(0, 12).c_str(), docs[i].method.c_str(),
                    docs[i].model_id.substr(0, 28).c_str());
      out << buf;
      nlohmann::ordered_json scores = nlohmann::ordered_json::object();
      for (const auto& m : metrics) {
        auto it = reports[i].scores.find(m);
        if (it == reports[i].scores.end()) {
          std::snprintf(buf, sizeof buf, " %20s", "-");
          scores[m] = nullptr;
        } else {
          std::snprintf(buf, sizeof buf, " %20.6f", it->second);
          scores[m] = it->second;
        }
        out << buf;
      }
      out << '\n';
      rows.push_back({{"id", docs[i].id}, {"method", docs[i].method}, {"model_id", docs[i].model_id}, {"scores", scores},
                      {"flags", to_json(reports[i])["flags"]}});
    }
    nlohmann::ordered_json cmp_json{{"dataset_id", docs.front().dataset_id}, {"metrics", metrics}, {"rows", rows}};
    if (json_path.empty()) {
      out << cmp_json.dump(2) << '\n';
    } else {
      try {
        write_file_atomic(std::filesystem::absolute(json_path), cmp_json.dump(2) + "\n");
      } catch (const std::exception& e) {
        err << "semgeo: " << e.what() << '\n';
        return kFailure;
      }
    }
    return kOk;
  }

  // serve
  ServiceConfig cfg;
  cfg.data_dir = common.data_dir;
  cfg.cache_dir = common.cache_dir;
  cfg.execution.threads = common.threads;
  cfg.max_items = max_items;
  cfg.time_cap_s = time_cap;
  Service service(std::move(cfg));
  err << "semgeo: serving on http://" << host << ":" << port << '\n';
  if (!service.listen(host, port)) {
    err << "semgeo: cannot listen on " << host << ":" << port << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace semgeo::cli
