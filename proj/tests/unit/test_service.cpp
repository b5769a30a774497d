#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "semgeo/service/cli.hpp"

using namespace semgeo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("semgeo-svc-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name() + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct CliResult {
  int code = 0;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "semgeo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) { return read_file(path); }

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::size_t count_files(const fs::path& root) {
  std::size_t n = 0;
  if (!fs::exists(root)) return 0;
  for (const auto& e : fs::recursive_directory_iterator(root)) n += e.is_regular_file();
  return n;
}

ProjectionDoc small_doc() {
  const auto ds = load_builtin(*find_descriptor("powers10"));
  Projection p;
  p.model_id = "m";
  p.method = "pca";
  p.params = {{"normalize", 1.0}};
  p.coords = Matrix::Random(9, 2);
  p.seed = 3;
  return make_doc("powers10", ds.items, p);
}

// Serves a 500 on every path so embedding requests fail fast.
struct BrokenProvider {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  explicit BrokenProvider(int delay_ms = 0) {
    server.Post(R"(.*)", [delay_ms](const httplib::Request&, httplib::Response& res) {
      if (delay_ms) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      res.status = 500;
      res.set_content("{}", "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~BrokenProvider() {
    server.stop();
    thread.join();
  }
  nlohmann::json config(double timeout, int retries) const {
    return {{"provider_kind", "http_openai_style"}, {"base_url", "http://127.0.0.1:" + std::to_string(port) + "/v1"},
            {"model_id", "broken"}, {"max_retries", retries}, {"timeout", timeout}, {"backoff_base", 0.01}};
  }
};

}  // namespace

// ---------------------------------------------------------------- doc

TEST(Doc, IdIsHashOfInputs) {
  const ProjectionDoc d = small_doc();
  EXPECT_EQ(d.id.size(), 64u);
  EXPECT_EQ(d.id, projection_id("powers10", "m", "pca", {{"normalize", 1.0}, {"dims", 2.0}}, 3));
  EXPECT_NE(d.id, projection_id("powers10", "m", "pca", {{"normalize", 1.0}, {"dims", 2.0}}, 4));
  EXPECT_EQ(d.params.at("dims"), 2.0);
}

TEST(Doc, RoundTripAndSchema) {
  const ProjectionDoc d = small_doc();
  const auto j = to_json(d);
  EXPECT_TRUE(schema_errors(j).empty());
  EXPECT_EQ(parse_doc(j.dump()), d);

  auto tampered = j;
  tampered["seed"] = 99;
  EXPECT_FALSE(schema_errors(tampered).empty());
  auto short_row = j;
  short_row["coords"][0] = {1.0};
  EXPECT_FALSE(schema_errors(short_row).empty());
  auto missing = j;
  missing.erase("items");
  EXPECT_FALSE(schema_errors(missing).empty());
  EXPECT_THROW(parse_doc("{"), DocError);
  EXPECT_THROW(parse_doc(tampered.dump()), DocError);
}

// ---------------------------------------------------------------- cli

TEST(Cli, EmbedMockFillsCache) {
  TempDir tmp;
  write(tmp / "four.jsonl",
        "{\"text\":\"cat\",\"lang\":\"enu\",\"category\":\"core.animals\",\"level\":\"word\",\"order\":null,\"pair_id\":null}\n"
        "{\"text\":\"dog\",\"lang\":\"enu\",\"category\":\"core.animals\",\"level\":\"word\",\"order\":null,\"pair_id\":null}\n"
        "{\"text\":\"sun\",\"lang\":\"enu\",\"category\":\"core.nature\",\"level\":\"word\",\"order\":null,\"pair_id\":null}\n"
        "{\"text\":\"sea\",\"lang\":\"enu\",\"category\":\"core.nature\",\"level\":\"word\",\"order\":null,\"pair_id\":null}\n");
  const auto r = run_cli({"embed", "--dataset", tmp / "four.jsonl", "--cache-dir", tmp / "cache"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("4 x 64"), std::string::npos) << r.out;
  EXPECT_EQ(count_files(tmp.path / "cache" / "embeddings"), 4u);
}

TEST(Cli, MissingDatasetIsUsageError) {
  TempDir tmp;
  const auto r = run_cli({"embed", "--dataset", tmp / "nope.jsonl", "--cache-dir", tmp / "cache"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({"project"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST(Cli, ProviderTimeoutReportsRetries) {
  TempDir tmp;
  BrokenProvider slow(800);
  write(tmp / "provider.json", slow.config(0.2, 1).dump());
  const auto r = run_cli({"embed", "--dataset", "powers10", "--provider-config", tmp / "provider.json", "--cache-dir", tmp / "cache"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("1 retries"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("2 attempts"), std::string::npos) << r.err;
}

TEST(Cli, ProjectDefaults) {
  TempDir tmp;
  const auto r = run_cli({"project", "--dataset", "enu_numbers", "--out", tmp / "doc.json", "--cache-dir", tmp / "cache"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::ordered_json::parse(slurp(tmp / "doc.json"));
  EXPECT_TRUE(schema_errors(j).empty());
  EXPECT_EQ(j["method"], "phate");
  EXPECT_EQ(j["params"]["k"], 10.0);
  EXPECT_EQ(j["params"]["alpha"], 10.0);
  EXPECT_EQ(j["params"]["t"], 20.0);
  EXPECT_EQ(j["coords"].size(), 92u);
  EXPECT_EQ(j["coords"][0].size(), 2u);
}

TEST(Cli, ReservedAndUnknownMethods) {
  TempDir tmp;
  const auto r = run_cli({"project", "--dataset", "powers10", "--method", "trimap", "--cache-dir", tmp / "cache"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("not implemented"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"project", "--dataset", "powers10", "--method", "umap", "--cache-dir", tmp / "cache"}).code, 2);
  EXPECT_EQ(run_cli({"project", "--dataset", "powers10", "--method", "nope", "--cache-dir", tmp / "cache"}).code, 2);
  EXPECT_EQ(run_cli({"project", "--dataset", "powers10", "--param", "k", "--cache-dir", tmp / "cache"}).code, 2);
  EXPECT_EQ(run_cli({"project", "--dataset", "powers10", "--dims", "4", "--cache-dir", tmp / "cache"}).code, 2);
  EXPECT_FALSE(fs::exists(tmp.path / "cache" / "embeddings"));
}

TEST(Cli, ComputeFailureExitsOne) {
  TempDir tmp;
  // 9 items cannot have 10 neighbours
  const auto r = run_cli({"project", "--dataset", "powers10", "--cache-dir", tmp / "cache"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ThreeDimensions) {
  TempDir tmp;
  const auto r = run_cli({"project", "--dataset", "enu_numbers", "--dims", "3", "--cache-dir", tmp / "cache"});
  ASSERT_EQ(r.code, 0) << r.err;
  const ProjectionDoc d = parse_doc(r.out);
  EXPECT_EQ(d.coords.cols(), 3);
  EXPECT_EQ(d.params.at("dims"), 3.0);
}

TEST(Cli, DiagnosePowersOfTen) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"project", "--dataset", "powers10", "--method", "cmds", "--out", tmp / "p.json", "--cache-dir", tmp / "cache"}).code, 0);
  const auto r = run_cli({"diagnose", tmp / "p.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("spiral_score"), std::string::npos) << r.out;
  const ProjectionDoc d = parse_doc(slurp(tmp / "p.json"));
  ASSERT_TRUE(d.diagnostics.has_value());
  EXPECT_EQ(d.diagnostics->projection_id, d.id);
  EXPECT_TRUE(d.diagnostics->scores.count("spiral_score"));
}

TEST(Cli, DiagnoseFlagsCollapsedMock) {
  TempDir tmp;
  write(tmp / "const.json", R"({"provider_kind":"mock","mock_constant":true})");
  ASSERT_EQ(run_cli({"project", "--dataset", "enu_numbers", "--provider-config", tmp / "const.json", "--out", tmp / "c.json",
                 "--cache-dir", tmp / "cache"})
                .code,
            0);
  ASSERT_EQ(run_cli({"diagnose", tmp / "c.json"}).code, 0);
  const ProjectionDoc d = parse_doc(slurp(tmp / "c.json"));
  ASSERT_TRUE(d.diagnostics.has_value());
  EXPECT_TRUE(d.diagnostics->flags.at("collapsed"));
}

TEST(Cli, DiagnoseIsIdempotent) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"project", "--dataset", "enu_numbers", "--out", tmp / "d.json", "--cache-dir", tmp / "cache"}).code, 0);
  const auto first = run_cli({"diagnose", tmp / "d.json"});
  const std::string after_first = slurp(tmp / "d.json");
  const auto second = run_cli({"diagnose", tmp / "d.json"});
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(after_first, slurp(tmp / "d.json"));
  EXPECT_EQ(run_cli({"diagnose", tmp / "missing.json"}).code, 1);
  write(tmp / "junk.json", "not json");
  EXPECT_EQ(run_cli({"diagnose", tmp / "junk.json"}).code, 1);
}

TEST(Cli, CompareTwoMethods) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"project", "--dataset", "enu_core", "--out", tmp / "a.json", "--cache-dir", tmp / "cache"}).code, 0);
  ASSERT_EQ(run_cli({"project", "--dataset", "enu_core", "--method", "tsne", "--out", tmp / "b.json", "--cache-dir", tmp / "cache"}).code, 0);
  const auto r = run_cli({"compare", tmp / "a.json", tmp / "b.json", "--json", tmp / "cmp.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  EXPECT_NE(line.find("clustering_score"), std::string::npos);
  while (std::getline(lines, line)) rows += !line.empty();
  EXPECT_EQ(rows, 2);
  const auto j = nlohmann::json::parse(slurp(tmp / "cmp.json"));
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0]["method"], "phate");
  EXPECT_EQ(j["rows"][1]["method"], "tsne");
}

TEST(Cli, CompareTwelveDocs) {
  TempDir tmp;
  const std::vector<std::string> methods{"phate", "pca", "cmds", "kpca", "isomap", "lle", "spectral", "tsne"};
  std::vector<std::string> args{"compare"};
  for (int i = 0; i < 12; ++i) {
    const std::string path = tmp / ("d" + std::to_string(i) + ".json");
    const auto r = run_cli({"project", "--dataset", "enu_numbers", "--method", methods[static_cast<std::size_t>(i) % methods.size()], "--seed",
                        std::to_string(i), "--out", path, "--cache-dir", tmp / "cache"});
    ASSERT_EQ(r.code, 0) << r.err;
    args.push_back(path);
  }
  args.push_back("--json");
  args.push_back(tmp / "cmp.json");
  const auto r = run_cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) count += !line.empty();
  EXPECT_EQ(count, 13);  // header + 12
  EXPECT_EQ(nlohmann::json::parse(slurp(tmp / "cmp.json"))["rows"].size(), 12u);
}

TEST(Cli, CompareRejectsMixedDatasets) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"project", "--dataset", "enu_numbers", "--method", "pca", "--out", tmp / "a.json", "--cache-dir", tmp / "cache"}).code, 0);
  ASSERT_EQ(run_cli({"project", "--dataset", "powers10", "--method", "pca", "--out", tmp / "b.json", "--cache-dir", tmp / "cache"}).code, 0);
  const auto r = run_cli({"compare", tmp / "a.json", tmp / "b.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("different datasets"), std::string::npos);
}

// ---------------------------------------------------------------- service

namespace {

struct Running {
  Service service;
  int port;
  httplib::Client client;
  explicit Running(ServiceConfig cfg) : service(std::move(cfg)), port(service.start()), client("127.0.0.1", port) {
    client.set_read_timeout(120, 0);
  }
  httplib::Result post(const nlohmann::json& body) { return client.Post("/projections", body.dump(), "application/json"); }
};

ServiceConfig config_in(const fs::path& dir) {
  ServiceConfig c;
  c.cache_dir = dir;
  return c;
}

}  // namespace

TEST(Service, DatasetCatalog) {
  TempDir tmp;
  Running s(config_in(tmp.path));
  auto r = s.client.Get("/datasets");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
  const auto list = nlohmann::json::parse(r->body);
  std::set<std::string> ids;
  for (const auto& d : list) ids.insert(d["id"].get<std::string>());
  for (const char* id : {"enu", "chn", "deu", "full", "trilingual_sample", "alphabets", "powers10"}) EXPECT_TRUE(ids.count(id)) << id;
  for (const auto& d : list) {
    if (d["id"] == "deu") EXPECT_EQ(d["total"], 420);
    if (d["id"] == "full") EXPECT_EQ(d["total"], 1410);
  }

  r = s.client.Get("/datasets/enu");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(nlohmann::json::parse(r->body)["items"].size(), 482u);
  r = s.client.Get("/datasets/klingon");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);
  EXPECT_TRUE(nlohmann::json::parse(r->body).contains("error"));
}

TEST(Service, MemoizesProjections) {
  TempDir tmp;
  Running s(config_in(tmp.path));
  auto first = s.post({{"dataset_id", "enu_core"}});
  ASSERT_TRUE(first);
  ASSERT_EQ(first->status, 200) << first->body;
  EXPECT_EQ(first->get_header_value("X-Memo"), "miss");
  EXPECT_EQ(s.service.computations(), 1u);
  const ProjectionDoc doc = parse_doc(first->body);
  EXPECT_EQ(doc.params.at("k"), 10.0);

  auto again = s.post({{"dataset_id", "enu_core"}, {"method", "phate"}, {"seed", 0}, {"params", {{"t", 20}}}});
  ASSERT_TRUE(again);
  EXPECT_EQ(again->status, 200);
  EXPECT_EQ(again->get_header_value("X-Memo"), "hit");
  EXPECT_EQ(again->body, first->body);
  EXPECT_EQ(s.service.computations(), 1u);

  auto got = s.client.Get("/projections/" + doc.id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->status, 200);
  EXPECT_EQ(got->body, first->body);

  auto diag = s.client.Get("/projections/" + doc.id + "/diagnostics");
  ASSERT_TRUE(diag);
  EXPECT_EQ(diag->status, 200);
  EXPECT_EQ(diag->get_header_value("X-Memo"), "miss");
  const DiagnosticsReport report = report_from_json(nlohmann::ordered_json::parse(diag->body));
  EXPECT_EQ(report.projection_id, doc.id);
  EXPECT_TRUE(report.scores.count("clustering_score"));
  auto diag2 = s.client.Get("/projections/" + doc.id + "/diagnostics");
  ASSERT_TRUE(diag2);
  EXPECT_EQ(diag2->get_header_value("X-Memo"), "hit");
  EXPECT_EQ(diag2->body, diag->body);

  const std::string unknown(64, 'a');
  EXPECT_EQ(s.client.Get("/projections/" + unknown)->status, 404);
  EXPECT_EQ(s.client.Get("/projections/" + unknown + "/diagnostics")->status, 404);
}

TEST(Service, RejectsBadRequests) {
  TempDir tmp;
  auto cfg = config_in(tmp.path);
  cfg.max_items = 100;
  Running s(std::move(cfg));
  auto status = [&](const std::string& body) {
    auto r = s.client.Post("/projections", body, "application/json");
    return r ? r->status : -1;
  };
  EXPECT_EQ(status("not json"), 400);
  EXPECT_EQ(status("[]"), 400);
  EXPECT_EQ(status(R"({"method":"pca"})"), 400);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","method":42})"), 400);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","method":"nope"})"), 400);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","params":{"k":"ten"}})"), 400);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","params":{"bogus":1}})"), 400);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","dims":4})"), 400);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","provider":{"provider_kind":"carrier-pigeon"}})"), 400);
  EXPECT_EQ(status(R"({"dataset_id":"klingon"})"), 404);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","method":"umap"})"), 422);
  EXPECT_EQ(status(R"({"dataset_id":"enu_numbers","method":"pacmap"})"), 422);
  EXPECT_EQ(status(R"({"dataset_id":"enu"})"), 422);  // 482 items over the cap
  EXPECT_EQ(status(R"({"dataset_id":"powers10"})"), 422);  // k=10 needs more than 9 items
  EXPECT_EQ(s.service.computations(), 2u);
}

TEST(Service, ProviderFailureIs502) {
  TempDir tmp;
  BrokenProvider broken;
  Running s(config_in(tmp.path));
  auto r = s.post({{"dataset_id", "powers10"}, {"method", "pca"}, {"provider", broken.config(2.0, 0)}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 502) << r->body;
  EXPECT_TRUE(nlohmann::json::parse(r->body).contains("error"));
}

TEST(Service, TimeCapThenLateMemo) {
  TempDir tmp;
  const nlohmann::json body{{"dataset_id", "enu_numbers"}, {"method", "tsne"}};
  {
    auto cfg = config_in(tmp.path);
    cfg.time_cap_s = 1e-6;
    Running s(std::move(cfg));
    auto r = s.post(body);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 422);
  }  // waits for the background computation
  Running s(config_in(tmp.path));
  auto r = s.post(body);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("X-Memo"), "hit");
  EXPECT_EQ(s.service.computations(), 0u);
}

TEST(Service, RestartIsByteIdentical) {
  TempDir a, b;
  const nlohmann::json body{{"dataset_id", "enu_numbers"}, {"method", "isomap"}, {"params", {{"k", 8}}}, {"seed", 5}};
  std::string first;
  {
    Running s(config_in(a.path));
    auto r = s.post(body);
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
    first = r->body;
  }
  Running s(config_in(b.path));
  auto r = s.post(body);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->get_header_value("X-Memo"), "miss");
  EXPECT_EQ(r->body, first);
}

TEST(Service, MatchesCli) {
  TempDir tmp;
  std::string served;
  {
    Running s(config_in(tmp.path / "svc"));
    auto r = s.post({{"dataset_id", "enu_numbers"}, {"method", "kpca"}, {"params", {{"gamma", 0.5}}}, {"dims", 3}, {"seed", 2}});
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200) << r->body;
    served = r->body;
  }
  const auto c = run_cli({"project", "--dataset", "enu_numbers", "--method", "kpca", "--param", "gamma=0.5", "--dims", "3", "--seed", "2",
                      "--out", tmp / "cli.json", "--cache-dir", tmp / "cli"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(slurp(tmp / "cli.json"), served + "\n");
}

TEST(Service, PreflightAllowsBrowsers) {
  TempDir tmp;
  Running s(config_in(tmp.path));
  auto r = s.client.Options("/projections");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
  EXPECT_NE(r->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);
}
