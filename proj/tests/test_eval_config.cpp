#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "retriever/config.hpp"
#include "retriever/error.hpp"
#include "retriever/eval.hpp"
#include "support.hpp"

using namespace retriever;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

std::vector<eval::EvalPair> pairs_from(const std::string& text) {
  std::istringstream in(text);
  return eval::parse_pairs(in);
}

}  // namespace

TEST_CASE("pair file parsing") {
  auto p = pairs_from("# header\nq1\tD#001\n\nq two\tD#002\r\n");
  REQUIRE(p.size() == 2);
  CHECK(p[1].query == "q two");
  CHECK(p[1].relevant_doc_id == "D#002");
  try {
    pairs_from("q1\tD#001\nno tab here\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("evaluation on the hybrid fixture") {
  auto r = support::retriever_for("hybrid");
  const auto pairs = eval::load_pairs(support::fixture("hybrid/pairs.tsv"), *r);
  REQUIRE(pairs.size() == 10);
  const auto report = eval::compare_modes(pairs, *r);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].mode == Mode::kBm25);
  CHECK(report.rows[0].hits_at_1 == 6);
  CHECK(report.rows[1].hits_at_1 == 7);
  CHECK(report.rows[2].hits_at_1 == 9);
  for (const auto& row : report.rows) {
    CHECK(row.hits_at_3 == 10);
    CHECK(row.accuracy_at_3 == 1.0);
    CHECK(row.n_queries == 10);
    CHECK(row.mean_latency_s > 0);
    CHECK(row.p50_latency_s > 0);
  }
  CHECK(report.rows[2].accuracy_at_1 == 0.9);

  const auto table = eval::format_table(report);
  CHECK(table.find("Hybrid") != std::string::npos);
  CHECK(table.find("90.0000") != std::string::npos);
  const auto j = nlohmann::json::parse(eval::to_json(report));
  CHECK(j.at("rows").size() == 3);
  CHECK(j["rows"][1]["hits_at_1"] == 7);
}

TEST_CASE("evaluation errors and empty queries") {
  auto r = support::retriever_for("thai");
  CHECK(code_of([&] { eval::evaluate({}, Mode::kHybrid, *r); }) == ErrorCode::kEmptyEval);
  CHECK(code_of([&] { eval::check_pairs({{"q", "nope#001"}}, *r); }) == ErrorCode::kUnknownDoc);
  CHECK(code_of([&] { eval::load_pairs("/nonexistent/pairs.tsv", *r); }) == ErrorCode::kIo);

  std::vector<eval::EvalPair> pairs = {{support::kImportQuery, "เมียนมาร์#001"},
                                       {"ขอหน่อยค่ะ", "เมียนมาร์#001"}};
  const auto row = eval::evaluate(pairs, Mode::kHybrid, *r);
  CHECK(row.n_queries == 2);
  CHECK(row.hits_at_1 == 1);
  CHECK(row.empty_queries == 1);
  CHECK(row.accuracy_at_1 == 0.5);
}

TEST_CASE("config parsing") {
  auto c = Config::parse(R"({"host": "0.0.0.0", "port": 9000, "index": "idx.json",
                             "lexicon": "/abs/lex.tsv", "bm25.k1": 1.2,
                             "bm25": {"b": 0.5, "global_stats": true}})",
                         "/etc/rtv");
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 9000);
  CHECK(c.index == "/etc/rtv/idx.json");
  CHECK(c.resources.lexicon == "/abs/lex.tsv");
  CHECK(c.resources.embeddings.empty());
  CHECK(c.ranking.bm25.k1 == 1.2);
  CHECK(c.ranking.bm25.b == 0.5);
  CHECK(c.ranking.global_stats);

  auto d = Config::parse("{}");
  CHECK(d.port == 8080);
  CHECK(d.ranking.bm25.k1 == 1.5);
  CHECK(d.ranking.bm25.b == 0.75);
  CHECK_FALSE(d.ranking.global_stats);

  CHECK(code_of([] { Config::parse("[]"); }) == ErrorCode::kFormat);
  CHECK(code_of([] { Config::parse(R"({"port": "x"})"); }) == ErrorCode::kFormat);
  CHECK(code_of([] { Config::parse(R"({"port": 70000})"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Config::parse(R"({"bm25.b": 2})"); }) == ErrorCode::kInvalidArgument);

  corpus::ResourcePaths into{"", "mine.tsv", "", ""};
  fill_missing(into, {"e.txt", "lex.tsv", "s.txt", "g.json"});
  CHECK(into == corpus::ResourcePaths{"e.txt", "mine.tsv", "s.txt", "g.json"});
}

TEST_CASE("config resolution through the environment") {
  support::TempDir tmp;
  std::ofstream(tmp / "c.json") << R"({"port": 1234})";
  ::setenv(kConfigEnvVar, (tmp / "c.json").c_str(), 1);
  CHECK(Config::resolve(std::nullopt).port == 1234);
  ::unsetenv(kConfigEnvVar);
  CHECK(Config::resolve(std::nullopt).port == 8080);
  CHECK(code_of([] { Config::resolve(std::string("/nonexistent/c.json")); }) == ErrorCode::kIo);
}
