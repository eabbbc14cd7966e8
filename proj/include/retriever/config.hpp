#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "retriever/corpus.hpp"
#include "retriever/ranker.hpp"

namespace retriever {

inline constexpr const char* kConfigEnvVar = "RETRIEVER_CONFIG";

/// Service and query settings. Every field is optional in the file; unset
/// resource paths fall back to those recorded in the index.
///
/// The file is a JSON object. BM25 keys may be given flat ("bm25.k1") or
/// nested ({"bm25": {"k1": ...}}).
struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string index;
  std::string static_dir;
  corpus::ResourcePaths resources;
  RankingConfig ranking;

  static Config parse(const std::string& json_text,
                      const std::filesystem::path& base_dir = {});
  static Config load(const std::filesystem::path& path);

  /// Loads `explicit_path` if given, else the file named by RETRIEVER_CONFIG,
  /// else returns defaults.
  static Config resolve(const std::optional<std::string>& explicit_path);
};

/// Fills empty fields of `into` from `from`.
void fill_missing(corpus::ResourcePaths& into, const corpus::ResourcePaths& from);

}  // namespace retriever
