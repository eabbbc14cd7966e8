#include <catch_amalgamated.hpp>

#include <fstream>
#include <functional>
#include <random>

#include <nlohmann/json.hpp>

#include "retriever/corpus.hpp"
#include "retriever/error.hpp"
#include "retriever/gazetteer.hpp"
#include "retriever/utf8.hpp"
#include "support.hpp"

using namespace retriever;
using namespace retriever::corpus;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

Gazetteer two_countries() {
  return Gazetteer(std::map<std::string, std::vector<std::string>>{{"MM", {"เมียนมาร์"}}, {"LA", {"ลาว"}}});
}

SourceEntry entry(const std::string& title) { return {"x.txt", "MM", title, std::nullopt}; }

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("gazetteer") {
  auto g = Gazetteer::parse(R"({"MM": ["เมียนมาร์", "พม่า", "Myanmar"], "LA": ["ลาว"]})");
  CHECK(g.has_country("MM"));
  CHECK_FALSE(g.has_country("VN"));
  CHECK(code_of([] { Gazetteer(std::map<std::string, std::vector<std::string>>{{"A", {"x"}}, {"B", {"x"}}}); }) == ErrorCode::kDuplicateEntry);
  CHECK(code_of([] { Gazetteer::parse("[1,2]"); }) != ErrorCode::kOk);
  CHECK(code_of([] { Gazetteer(std::map<std::string, std::vector<std::string>>{{"none", {"x"}}}); }) != ErrorCode::kOk);

  auto res = support::resources("thai");
  const auto& lex = res->pipeline.lexicon;
  g.compile(lex);
  CHECK(g.detect(text::tokenize("ประชากรในเมียนมาร์", lex)) == std::vector<std::string>{"MM"});
  CHECK(g.detect(text::tokenize("พม่าและลาว", lex)) == std::vector<std::string>{"LA", "MM"});
  CHECK(g.detect(text::tokenize("myanmar", lex)) == std::vector<std::string>{"MM"});
  CHECK(g.detect(text::tokenize("ข้อมูล", lex)).empty());
}

TEST_CASE("manifest parsing") {
  const auto g = two_countries();
  const std::filesystem::path base = "/data/corpus";
  auto m = parse_manifest_text(
      R"([{"path":"a.txt","country":"MM","title":"A","uri":"https://x/a"},
          {"path":"/abs/b.txt","country":"none","title":"B"}])",
      base, g);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].path == base / "a.txt");
  CHECK(m.entries[0].uri == "https://x/a");
  CHECK(m.entries[1].path == "/abs/b.txt");
  CHECK_FALSE(m.entries[1].uri.has_value());

  auto parse = [&](const std::string& s) { return parse_manifest_text(s, base, g); };
  CHECK(code_of([&] { parse("[]"); }) == ErrorCode::kManifestEmpty);
  CHECK(code_of([&] { parse(R"([{"path":"a","country":"XX","title":"A"}])"); }) ==
        ErrorCode::kUnknownCountry);
  CHECK(code_of([&] {
          parse(R"([{"path":"a","country":"MM","title":"A"},
                    {"path":"a","country":"MM","title":"B"}])");
        }) == ErrorCode::kDuplicateEntry);
  CHECK(code_of([&] {
          parse(R"([{"path":"a","country":"MM","title":"A"},
                    {"path":"b","country":"MM","title":"A"}])");
        }) == ErrorCode::kDuplicateEntry);
  CHECK(code_of([&] { parse(R"([{"path":"a","country":"MM"}])"); }) != ErrorCode::kOk);
  try {
    parse("[\n{\"path\": \"a\",\n oops}\n]");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(code_of([&] { parse_manifest("/nonexistent/manifest.json", g); }) == ErrorCode::kIo);
}

TEST_CASE("segment_document") {
  auto two = segment_document("# H1\nbody1\n# H2\nbody2", entry("T"));
  REQUIRE(two.size() == 2);
  CHECK(two[0].heading_text == "H1");
  CHECK(two[0].body_text == "body1");
  CHECK(two[1].heading_text == "H2");
  CHECK(two[1].body_text == "body2");
  CHECK(two[0].doc_id == "T#001");
  CHECK(two[1].doc_id == "T#002");
  CHECK(two[0].country == "MM");

  auto pre = segment_document("preamble\n# H1\nbody", entry("T"));
  REQUIRE(pre.size() == 1);
  CHECK(pre[0].body_text == "body");

  CHECK(code_of([] { segment_document("no markers at all", entry("T")); }) ==
        ErrorCode::kNoHeadings);
  CHECK(code_of([] { segment_document("#   \nbody", entry("T")); }) == ErrorCode::kParse);
  CHECK(segment_document("#hashtag\n# H\nx", entry("T")).size() == 1);
  CHECK(make_doc_id("เมียนมาร์", 12) == "เมียนมาร์#012");
}

TEST_CASE("segmentation partitions the post-preamble text") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::string text = trial % 2 ? "intro line\n" : "";
    std::vector<std::pair<std::string, std::string>> expected;
    for (int i = 0; i < n; ++i) {
      const std::string h = "h" + std::to_string(i);
      std::string body;
      for (int j = 0; j < static_cast<int>(rng() % 3); ++j) {
        body += (j ? "\n" : "") + std::string("line") + std::to_string(j);
      }
      text += "# " + h + "\n" + body + (body.empty() ? "" : "\n");
      expected.emplace_back(h, body);
    }
    auto sections = segment_document(text, entry("T"));
    REQUIRE(sections.size() == expected.size());
    for (std::size_t i = 0; i < sections.size(); ++i) {
      CHECK(sections[i].heading_text == expected[i].first);
      CHECK(sections[i].body_text == expected[i].second);
      CHECK(sections[i].doc_id == make_doc_id("T", i + 1));
    }
  }
}

TEST_CASE("process_section") {
  auto res = support::resources("thai");
  RawSection s{"T#001", "MM", "ลักษณะภูมิประเทศ", "  เมียนมาร์มีภูเขาสูง  ", "u"};
  auto doc = process_section(s, res->pipeline, res->embeddings);
  CHECK(doc.heading_keywords == std::vector<std::string>{"ลักษณะ", "ภูมิประเทศ"});
  CHECK_FALSE(doc.heading_vector_is_zero);
  CHECK(doc.heading_vector.size() == res->embeddings.dim());
  CHECK(doc.snippet == "เมียนมาร์มีภูเขาสูง");
  CHECK(doc.content_tokens == std::vector<std::string>{"เมียนมาร์", "ภูเขา", "สูง"});

  RawSection stop{"T#002", "MM", "ในของ", "", ""};
  auto empty = process_section(stop, res->pipeline, res->embeddings);
  CHECK(empty.heading_keywords.empty());
  CHECK(empty.heading_vector_is_zero);
  CHECK(empty.heading_vector == embed::Vector(res->embeddings.dim(), 0.0));

  std::string long_body;
  for (int i = 0; i < 300; ++i) long_body += "ก";
  RawSection big{"T#003", "MM", "ภาษา", long_body, ""};
  CHECK(utf8::decode(process_section(big, res->pipeline, res->embeddings).snippet).size() ==
        kSnippetChars);
}

TEST_CASE("build_corpus over the Thai fixture") {
  auto res = support::resources("thai");
  auto store = support::build_store(*res, support::fixture("thai/manifest.json"));
  CHECK(store.documents.size() == 12);
  CHECK(store.embedding_dim == res->embeddings.dim());
  CHECK(store.documents[0].doc_id == "เมียนมาร์#001");
  CHECK(store.documents[0].heading == support::kImportHeading);
  CHECK(store.documents[0].uri == "https://example.org/guides/mm");

  SECTION("deterministic apart from the timestamp") {
    auto again = support::build_store(*res, support::fixture("thai/manifest.json"));
    again.build_timestamp = store.build_timestamp;
    CHECK(to_json(again) == to_json(store));
  }
  SECTION("json round trip") {
    auto back = store_from_json(to_json(store, 2));
    CHECK(back.documents == store.documents);
    CHECK(back.version == store.version);
    CHECK(back.resources == store.resources);
  }
  SECTION("save and load") {
    support::TempDir tmp;
    save_store(store, tmp / "index.json");
    CHECK(load_store(tmp / "index.json").documents == store.documents);
    CHECK(code_of([&] { load_store(tmp / "missing.json"); }) == ErrorCode::kIo);
    write(tmp / "bad.json", "{\"version\": 1}");
    CHECK(code_of([&] { load_store(tmp / "bad.json"); }) != ErrorCode::kOk);
  }
}

TEST_CASE("build_corpus counts and failures") {
  auto res = support::resources("thai");
  support::TempDir tmp;
  write(tmp / "a.txt", "# ภาษา\nก\n# ประชากร\nข\n# ภูเขา\nค\n");
  write(tmp / "b.txt", "# ฝน\nง\n# ถนน\nจ\n");
  write(tmp / "m.json", R"([{"path":"a.txt","country":"MM","title":"A"},
                            {"path":"b.txt","country":"LA","title":"B"}])");
  auto store = support::build_store(*res, tmp / "m.json");
  CHECK(store.documents.size() == 5);

  write(tmp / "bad.json", R"([{"path":"a.txt","country":"MM","title":"A"},
                              {"path":"missing.txt","country":"LA","title":"B"}])");
  try {
    support::build_store(*res, tmp / "bad.json");
    FAIL("expected an ingest error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIngest);
    CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
  }

  write(tmp / "nohead.txt", "just text");
  write(tmp / "nohead.json", R"([{"path":"nohead.txt","country":"MM","title":"N"}])");
  CHECK(code_of([&] { support::build_store(*res, tmp / "nohead.json"); }) ==
        ErrorCode::kNoHeadings);
}
