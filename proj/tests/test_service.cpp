#include <catch_amalgamated.hpp>

#include <sys/stat.h>

#include <atomic>
#include <fstream>
#include <future>
#include <regex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "retriever/service.hpp"
#include "support.hpp"

using namespace retriever;
using nlohmann::json;

namespace {

std::string without_latency(const std::string& body) {
  static const std::regex latency(R"(,?"latency_ms":[-+0-9.eE]+)");
  return std::regex_replace(body, latency, "");
}

std::string error_of(const HttpResponse& r) { return json::parse(r.body).at("error"); }

std::string query_body(const std::string& text, int top_k = 3) {
  return json{{"text", text}, {"top_k", top_k}}.dump();
}

std::string reindex_body(const std::string& manifest) {
  return json{{"manifest", support::fixture("thai/" + manifest).string()}}.dump();
}

struct Fixture {
  std::shared_ptr<const Resources> res = support::resources("thai");
  Service service{res};
  Fixture() {
    service.install(support::build_store(*res, support::fixture("thai/manifest.json")));
  }
};

}  // namespace

TEST_CASE("query endpoint") {
  Fixture f;
  auto r = f.service.handle_query(query_body(support::kImportQuery));
  REQUIRE(r.status == 200);
  auto body = json::parse(r.body);
  REQUIRE(body["results"].size() == 3);
  const auto& first = body["results"][0];
  CHECK(first["heading"] == support::kImportHeading);
  CHECK(first["country"] == "MM");
  CHECK(first["uri"] == "https://example.org/guides/mm");
  CHECK(first["final_rank"] == 1);
  CHECK(first["heading_rank"].is_number_integer());
  CHECK(first["content_rank"].is_number_integer());
  CHECK(first["borda_points"].is_number_integer());
  CHECK(first["snippet"].get<std::string>().size() > 0);
  CHECK(body["detected_countries"] == json::array({"MM"}));
  CHECK(body["latency_ms"].is_number());
  CHECK(body["mode"] == "hybrid");
  CHECK(body["version"] == 1);

  SECTION("defaults and single modes") {
    auto d = json::parse(f.service.handle_query(json{{"text", support::kImportQuery}}.dump()).body);
    CHECK(d["results"].size() == 3);
    auto b = json::parse(
        f.service
            .handle_query(json{{"text", support::kImportQuery}, {"mode", "bm25"}}.dump())
            .body);
    CHECK(b["results"][0]["heading_rank"].is_null());
    CHECK(b["mode"] == "bm25");
  }
}

TEST_CASE("query endpoint errors") {
  Fixture f;
  auto q = [&](const std::string& body) { return f.service.handle_query(body); };
  CHECK(q(R"({"text": "   "})").status == 400);
  CHECK(error_of(q(R"({"text": "   "})")) == "empty_query");
  CHECK(error_of(q(R"({"text": "ขอ?หน่อยค่ะ"})")) == "empty_query");
  CHECK(error_of(q(R"({"text": "x", "top_k": 0})")) == "bad_top_k");
  CHECK(error_of(q(R"({"text": "x", "top_k": 51})")) == "bad_top_k");
  CHECK(error_of(q(R"({"text": "x", "top_k": "3"})")) == "bad_top_k");
  CHECK(error_of(q(R"({"text": "x", "top_k": 2.5})")) == "bad_top_k");
  CHECK(error_of(q(R"({"text": "x", "mode": "cosine"})")) == "bad_mode");
  CHECK(q("not json").status == 400);
  CHECK(error_of(q("not json")) == "bad_request");
  CHECK(error_of(q(R"({"query": "x"})")) == "bad_request");
  CHECK(error_of(q(R"([1])")) == "bad_request");
  CHECK(q(R"({"text": "ข้อมูล", "top_k": 50})").status == 200);

  Service empty(f.res);
  auto r = empty.handle_query(R"({"text": "ข้อมูล"})");
  CHECK(r.status == 503);
  CHECK(error_of(r) == "no_index");
  // Validation still comes first.
  CHECK(error_of(empty.handle_query(R"({"text": " "})")) == "empty_query");
}

TEST_CASE("health endpoint") {
  Fixture f;
  auto h = json::parse(f.service.handle_health().body);
  CHECK(h["status"] == "ok");
  CHECK(h["documents"] == 12);
  CHECK(h["version"] == 1);
  CHECK(h["embedding_dim"] == 12);

  Service empty(f.res);
  auto e = json::parse(empty.handle_health().body);
  CHECK(e["documents"] == 0);
  CHECK(e["version"] == 0);
}

TEST_CASE("reindex endpoint") {
  Fixture f;
  auto ok = f.service.handle_reindex(reindex_body("manifest_mm.json"));
  REQUIRE(ok.status == 200);
  CHECK(json::parse(ok.body) == json{{"documents", 5}, {"version", 2}});
  CHECK(json::parse(f.service.handle_health().body)["documents"] == 5);

  auto bad = f.service.handle_reindex(reindex_body("manifest_bad.json"));
  CHECK(bad.status == 422);
  CHECK(error_of(bad) == "unknown_country");
  auto missing = f.service.handle_reindex(reindex_body("no_such_manifest.json"));
  CHECK(missing.status == 422);
  // The previous corpus stays live.
  auto h = json::parse(f.service.handle_health().body);
  CHECK(h["documents"] == 5);
  CHECK(h["version"] == 2);
  CHECK(f.service.handle_query(query_body(support::kImportQuery)).status == 200);

  CHECK(error_of(f.service.handle_reindex("{}")) == "bad_request");
  CHECK(error_of(f.service.handle_reindex("nope")) == "bad_request");
}

TEST_CASE("concurrent reindex is refused") {
  Fixture f;
  support::TempDir tmp;
  const auto fifo = tmp / "manifest.json";
  REQUIRE(mkfifo(fifo.c_str(), 0600) == 0);

  // The first reindex blocks opening the FIFO while holding the reindex lock.
  auto start_first = [&] {
    return std::async(std::launch::async, [&] {
      return f.service.handle_reindex(json{{"manifest", fifo.string()}}.dump());
    });
  };
  auto first = start_first();
  HttpResponse second;
  for (int i = 0; i < 10000; ++i) {
    // If the probe below won the lock race, the first call bounced; retry it.
    if (first.wait_for(std::chrono::seconds(0)) == std::future_status::ready) {
      REQUIRE(first.get().status == 409);
      first = start_first();
    }
    second = f.service.handle_reindex("{}");
    if (second.status == 409) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  CHECK(second.status == 409);
  CHECK(error_of(second) == "reindex_in_progress");
  // Queries are unaffected while the reindex is stuck.
  CHECK(f.service.handle_query(query_body(support::kImportQuery)).status == 200);

  {
    std::ofstream w(fifo);
    w << R"([{"path": ")" << support::fixture("thai/docs/mm_guide.txt").string()
      << R"(", "country": "MM", "title": "M"}])";
  }
  const auto done = first.get();
  CHECK(done.status == 200);
  CHECK(json::parse(done.body)["documents"] == 5);
}

TEST_CASE("queries never observe a mixed corpus") {
  Fixture f;
  const std::string body = query_body("ข้อมูลการนำเข้าสินค้า", 50);

  // Reference answers for each corpus, version field removed.
  auto strip = [](const std::string& b) {
    auto j = json::parse(b);
    j.erase("latency_ms");
    const int version = j["version"];
    j.erase("version");
    return std::make_pair(version, j.dump());
  };
  const auto full = strip(f.service.handle_query(body).body).second;
  REQUIRE(f.service.handle_reindex(reindex_body("manifest_mm.json")).status == 200);
  const auto mm_only = strip(f.service.handle_query(body).body).second;
  REQUIRE(full != mm_only);
  // Version 1 and odd versions hold the full corpus from here on.
  REQUIRE(f.service.handle_reindex(reindex_body("manifest.json")).status == 200);

  std::atomic<bool> stop{false};
  std::atomic<int> checked{0}, bad{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&] {
      while (!stop) {
        auto r = f.service.handle_query(body);
        auto [version, rest] = strip(r.body);
        const auto& expected = version % 2 == 1 ? full : mm_only;
        if (r.status != 200 || rest != expected) ++bad;
        ++checked;
      }
    });
  }
  for (int i = 0; i < 10; ++i) {
    const auto manifest = i % 2 == 0 ? "manifest_mm.json" : "manifest.json";
    REQUIRE(f.service.handle_reindex(reindex_body(manifest)).status == 200);
  }
  stop = true;
  for (auto& t : readers) t.join();
  CHECK(checked > 0);
  CHECK(bad == 0);
}

TEST_CASE("HTTP transport") {
  Fixture f;
  HttpServer server(f.service);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.run(); });
  struct StopOnExit {
    HttpServer& s;
    std::thread& t;
    ~StopOnExit() {
      if (t.joinable()) {
        s.stop();
        t.join();
      }
    }
  } guard{server, loop};

  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30, 0);

  auto health = client.Get("/v1/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Content-Type").find("application/json") == 0);

  auto bad = client.Post("/v1/query", R"({"text": "x", "top_k": 0})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(json::parse(bad->body)["error"] == "bad_top_k");

  SECTION("identical concurrent queries give identical bytes") {
    const auto body = query_body(support::kImportQuery);
    std::vector<std::future<std::string>> futures;
    for (int i = 0; i < 16; ++i) {
      futures.push_back(std::async(std::launch::async, [&] {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(30, 0);
        auto r = c.Post("/v1/query", body, "application/json");
        if (!r) return "failed: " + httplib::to_string(r.error());
        return r->status == 200 ? r->body : "failed: status " + std::to_string(r->status);
      }));
    }
    std::vector<std::string> bodies;
    for (auto& fu : futures) bodies.push_back(fu.get());
    for (const auto& b : bodies) {
      INFO(b.substr(0, 80));
      REQUIRE(b.rfind("failed", 0) != 0);
      CHECK(without_latency(b) == without_latency(bodies.front()));
    }
    CHECK(without_latency(bodies.front()).find("latency_ms") == std::string::npos);
  }

  SECTION("reindex over HTTP") {
    auto r = client.Post("/v1/reindex", reindex_body("manifest_mm.json"), "application/json");
    REQUIRE(r);
    CHECK(r->status == 200);
  }

  server.stop();
  loop.join();
}
