#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "retriever/embeddings.hpp"
#include "retriever/gazetteer.hpp"
#include "retriever/thai_text.hpp"

namespace retriever::corpus {

inline constexpr const char* kNoCountry = "none";
inline constexpr std::size_t kSnippetChars = 200;

struct SourceEntry {
  std::filesystem::path path;  // resolved against the manifest directory
  std::string country;
  std::string title;
  std::optional<std::string> uri;
};

struct CorpusManifest {
  std::vector<SourceEntry> entries;
};

/// JSON array of {"path", "country", "title", "uri"?}. Relative paths resolve
/// against `base_dir`. Errors: kParse (with line), kManifestEmpty,
/// kDuplicateEntry, kUnknownCountry.
CorpusManifest parse_manifest_text(const std::string& json_text,
                                   const std::filesystem::path& base_dir,
                                   const Gazetteer& gazetteer);
CorpusManifest parse_manifest(const std::filesystem::path& manifest_file,
                              const Gazetteer& gazetteer);

struct RawSection {
  std::string doc_id;
  std::string country;
  std::string heading_text;
  std::string body_text;
  std::string uri;
};

/// Builds the deterministic id for the `ordinal`-th (1-based) heading of a file.
std::string make_doc_id(const std::string& title, std::size_t ordinal);

/// Splits on lines starting with "# ". Text before the first marker is
/// dropped. Throws kNoHeadings if there is no marker and kParse for a marker
/// with an empty heading.
std::vector<RawSection> segment_document(std::string_view source_text,
                                         const SourceEntry& entry);

struct ProcessedDocument {
  std::string doc_id;
  std::string country;
  std::string heading;
  std::vector<std::string> heading_keywords;
  embed::Vector heading_vector;
  bool heading_vector_is_zero = true;
  std::vector<std::string> content_tokens;
  std::string snippet;
  std::string uri;

  bool operator==(const ProcessedDocument&) const = default;
};

ProcessedDocument process_section(const RawSection& section,
                                  const text::TextPipeline& pipeline,
                                  const embed::EmbeddingTable& embeddings,
                                  text::SpellingCache* cache = nullptr);

/// Where the data files a store was built with live; recorded in the store so
/// a query process can reload the same pipeline.
struct ResourcePaths {
  std::string embeddings;
  std::string lexicon;
  std::string stopwords;
  std::string gazetteer;

  bool operator==(const ResourcePaths&) const = default;
};

struct CorpusStore {
  int version = 1;
  std::size_t embedding_dim = 0;
  std::string build_timestamp;
  std::vector<ProcessedDocument> documents;
  ResourcePaths resources;
};

/// One document per heading, in manifest order then heading order. All or
/// nothing: an unreadable file throws kIngest naming it.
CorpusStore build_corpus(const CorpusManifest& manifest,
                         const text::TextPipeline& pipeline,
                         const embed::EmbeddingTable& embeddings);

std::string to_json(const CorpusStore& store, int indent = -1);
CorpusStore store_from_json(const std::string& json_text);

/// Writes through a temporary file and renames it into place.
void save_store(const CorpusStore& store, const std::filesystem::path& path);
CorpusStore load_store(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace retriever::corpus
