#include "retriever/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "retriever/error.hpp"
#include "retriever/utf8.hpp"

namespace retriever::corpus {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path, ErrorCode on_error,
                      const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(on_error, "cannot read " + what + ": " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(on_error, "cannot read " + what + ": " + path.string());
  return ss.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

std::string trim_ws(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

bool is_marker(std::string_view line) {
  return line.size() >= 2 && line[0] == '#' && line[1] == ' ';
}

const json& require_string(const json& entry, const char* key, std::size_t index) {
  auto it = entry.find(key);
  if (it == entry.end() || !it->is_string()) {
    throw Error(ErrorCode::kParse, "manifest entry " + std::to_string(index) +
                                       ": missing or non-string \"" + key + "\"");
  }
  return *it;
}

}  // namespace

CorpusManifest parse_manifest_text(const std::string& json_text,
                                   const std::filesystem::path& base_dir,
                                   const Gazetteer& gazetteer) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                "manifest line " + std::to_string(line_of_offset(json_text, e.byte)) +
                    ": " + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kParse, "manifest line 1: top level must be an array");
  }
  if (doc.empty()) throw Error(ErrorCode::kManifestEmpty, "manifest has no entries");

  CorpusManifest manifest;
  std::set<std::string> paths;
  std::set<std::string> titles;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& e = doc[i];
    if (!e.is_object()) {
      throw Error(ErrorCode::kParse, "manifest entry " + std::to_string(i) +
                                         ": expected an object");
    }
    SourceEntry entry;
    std::filesystem::path p = require_string(e, "path", i).get<std::string>();
    if (p.empty()) {
      throw Error(ErrorCode::kParse, "manifest entry " + std::to_string(i) + ": empty path");
    }
    entry.path = (p.is_absolute() ? p : base_dir / p).lexically_normal();
    entry.country = require_string(e, "country", i).get<std::string>();
    entry.title = require_string(e, "title", i).get<std::string>();
    if (entry.title.empty()) {
      throw Error(ErrorCode::kParse, "manifest entry " + std::to_string(i) + ": empty title");
    }
    if (auto it = e.find("uri"); it != e.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw Error(ErrorCode::kParse,
                    "manifest entry " + std::to_string(i) + ": \"uri\" must be a string");
      }
      entry.uri = it->get<std::string>();
    }
    if (!paths.insert(entry.path.string()).second) {
      throw Error(ErrorCode::kDuplicateEntry, "duplicate manifest path: " + entry.path.string());
    }
    // Titles seed doc ids, so they must be unique too.
    if (!titles.insert(entry.title).second) {
      throw Error(ErrorCode::kDuplicateEntry, "duplicate manifest title: " + entry.title);
    }
    if (entry.country != kNoCountry && !gazetteer.has_country(entry.country)) {
      throw Error(ErrorCode::kUnknownCountry, "unknown country code '" + entry.country +
                                                  "' for " + entry.path.string());
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

CorpusManifest parse_manifest(const std::filesystem::path& manifest_file,
                              const Gazetteer& gazetteer) {
  const auto text = read_file(manifest_file, ErrorCode::kIo, "manifest");
  return parse_manifest_text(text, manifest_file.parent_path(), gazetteer);
}

std::string make_doc_id(const std::string& title, std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", ordinal);
  return title + "#" + buf;
}

std::vector<RawSection> segment_document(std::string_view source_text,
                                         const SourceEntry& entry) {
  std::vector<RawSection> sections;
  std::vector<std::string_view> body_lines;
  auto close_section = [&] {
    if (sections.empty()) return;
    std::string body;
    for (std::size_t i = 0; i < body_lines.size(); ++i) {
      if (i > 0) body.push_back('\n');
      body.append(body_lines[i]);
    }
    sections.back().body_text = std::move(body);
    body_lines.clear();
  };

  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < source_text.size()) {
    auto end = source_text.find('\n', start);
    if (end == std::string_view::npos) end = source_text.size();
    const auto line = source_text.substr(start, end - start);
    ++line_no;
    if (is_marker(line)) {
      close_section();
      RawSection s;
      s.heading_text = trim_ws(line.substr(2));
      if (s.heading_text.empty()) {
        throw Error(ErrorCode::kParse, entry.path.string() + " line " +
                                           std::to_string(line_no) + ": empty heading");
      }
      s.doc_id = make_doc_id(entry.title, sections.size() + 1);
      s.country = entry.country;
      s.uri = entry.uri.value_or("");
      sections.push_back(std::move(s));
    } else if (!sections.empty()) {
      body_lines.push_back(line);
    }
    if (end == source_text.size()) break;
    start = end + 1;
  }
  close_section();
  if (sections.empty()) {
    throw Error(ErrorCode::kNoHeadings, "no heading markers in " + entry.path.string());
  }
  return sections;
}

ProcessedDocument process_section(const RawSection& section,
                                  const text::TextPipeline& pipeline,
                                  const embed::EmbeddingTable& embeddings,
                                  text::SpellingCache* cache) {
  ProcessedDocument doc;
  doc.doc_id = section.doc_id;
  doc.country = section.country;
  doc.heading = section.heading_text;
  doc.heading_keywords = pipeline.heading_keywords(section.heading_text);
  auto pooled = embed::embed_keywords(doc.heading_keywords, embeddings);
  doc.heading_vector = std::move(pooled.values);
  doc.heading_vector_is_zero = pooled.is_zero;
  doc.content_tokens = pipeline.content_tokens(section.body_text, cache);
  doc.snippet = utf8::prefix(trim_ws(section.body_text), kSnippetChars);
  doc.uri = section.uri;
  return doc;
}

CorpusStore build_corpus(const CorpusManifest& manifest,
                         const text::TextPipeline& pipeline,
                         const embed::EmbeddingTable& embeddings) {
  // Read and segment everything before processing so a bad file fails fast.
  std::vector<RawSection> sections;
  for (const auto& entry : manifest.entries) {
    const auto text = read_file(entry.path, ErrorCode::kIngest, "source document");
    auto part = segment_document(text, entry);
    std::move(part.begin(), part.end(), std::back_inserter(sections));
  }

  CorpusStore store;
  store.embedding_dim = embeddings.dim();
  store.build_timestamp = utc_timestamp();
  store.documents.reserve(sections.size());
  text::SpellingCache cache;
  for (const auto& s : sections) {
    store.documents.push_back(process_section(s, pipeline, embeddings, &cache));
  }
  return store;
}

// ---------------------------------------------------------------------------
// Persistence

std::string to_json(const CorpusStore& store, int indent) {
  json docs = json::array();
  for (const auto& d : store.documents) {
    docs.push_back({
        {"doc_id", d.doc_id},
        {"country", d.country},
        {"heading", d.heading},
        {"heading_keywords", d.heading_keywords},
        {"heading_vector", d.heading_vector},
        {"heading_vector_is_zero", d.heading_vector_is_zero},
        {"content_tokens", d.content_tokens},
        {"snippet", d.snippet},
        {"uri", d.uri},
    });
  }
  json out = {
      {"version", store.version},
      {"embedding_dim", store.embedding_dim},
      {"build_timestamp", store.build_timestamp},
      {"documents", std::move(docs)},
      {"resources",
       {
           {"embeddings", store.resources.embeddings},
           {"lexicon", store.resources.lexicon},
           {"stopwords", store.resources.stopwords},
           {"gazetteer", store.resources.gazetteer},
       }},
  };
  return out.dump(indent);
}

CorpusStore store_from_json(const std::string& json_text) {
  try {
    const auto doc = json::parse(json_text);
    CorpusStore store;
    store.version = doc.at("version").get<int>();
    store.embedding_dim = doc.at("embedding_dim").get<std::size_t>();
    store.build_timestamp = doc.at("build_timestamp").get<std::string>();
    for (const auto& d : doc.at("documents")) {
      ProcessedDocument p;
      p.doc_id = d.at("doc_id").get<std::string>();
      p.country = d.at("country").get<std::string>();
      p.heading = d.at("heading").get<std::string>();
      p.heading_keywords = d.at("heading_keywords").get<std::vector<std::string>>();
      p.heading_vector = d.at("heading_vector").get<std::vector<double>>();
      p.heading_vector_is_zero = d.at("heading_vector_is_zero").get<bool>();
      p.content_tokens = d.at("content_tokens").get<std::vector<std::string>>();
      p.snippet = d.at("snippet").get<std::string>();
      p.uri = d.value("uri", "");
      if (p.heading_vector.size() != store.embedding_dim) {
        throw Error(ErrorCode::kFormat, "index: heading vector of " + p.doc_id +
                                            " does not match embedding_dim");
      }
      store.documents.push_back(std::move(p));
    }
    if (auto it = doc.find("resources"); it != doc.end()) {
      store.resources.embeddings = it->value("embeddings", "");
      store.resources.lexicon = it->value("lexicon", "");
      store.resources.stopwords = it->value("stopwords", "");
      store.resources.gazetteer = it->value("gazetteer", "");
    }
    return store;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("index: ") + e.what());
  }
}

void save_store(const CorpusStore& store, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write index: " + tmp.string());
    out << to_json(store, 1) << '\n';
    if (!out) throw Error(ErrorCode::kIo, "cannot write index: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move index into place: " + path.string());
  }
}

CorpusStore load_store(const std::filesystem::path& path) {
  return store_from_json(read_file(path, ErrorCode::kIo, "index"));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace retriever::corpus
