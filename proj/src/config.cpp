#include "retriever/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "retriever/error.hpp"

namespace retriever {

using nlohmann::json;

namespace {

const json* lookup(const json& doc, const std::string& section, const std::string& key) {
  if (auto it = doc.find(section + "." + key); it != doc.end()) return &*it;
  if (auto sec = doc.find(section); sec != doc.end() && sec->is_object()) {
    if (auto it = sec->find(key); it != sec->end()) return &*it;
  }
  return nullptr;
}

std::string path_value(const json& doc, const char* key,
                       const std::filesystem::path& base_dir) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return {};
  std::filesystem::path p = it->get<std::string>();
  if (p.empty() || p.is_absolute() || base_dir.empty()) return p.string();
  return (base_dir / p).lexically_normal().string();
}

}  // namespace

Config Config::parse(const std::string& json_text, const std::filesystem::path& base_dir) {
  Config cfg;
  try {
    const auto doc = json::parse(json_text);
    if (!doc.is_object()) throw Error(ErrorCode::kFormat, "config must be a JSON object");
    cfg.host = doc.value("host", cfg.host);
    cfg.port = doc.value("port", cfg.port);
    cfg.index = path_value(doc, "index", base_dir);
    cfg.static_dir = path_value(doc, "static_dir", base_dir);
    cfg.resources.embeddings = path_value(doc, "embeddings", base_dir);
    cfg.resources.lexicon = path_value(doc, "lexicon", base_dir);
    cfg.resources.stopwords = path_value(doc, "stopwords", base_dir);
    cfg.resources.gazetteer = path_value(doc, "gazetteer", base_dir);
    if (const auto* v = lookup(doc, "bm25", "k1")) cfg.ranking.bm25.k1 = v->get<double>();
    if (const auto* v = lookup(doc, "bm25", "b")) cfg.ranking.bm25.b = v->get<double>();
    if (const auto* v = lookup(doc, "bm25", "global_stats")) {
      cfg.ranking.global_stats = v->get<bool>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("config: ") + e.what());
  }
  bm25::validate(cfg.ranking.bm25);
  if (cfg.port < 0 || cfg.port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "config: port out of range");
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

Config Config::resolve(const std::optional<std::string>& explicit_path) {
  if (explicit_path && !explicit_path->empty()) return load(*explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return load(env);
  }
  return Config{};
}

void fill_missing(corpus::ResourcePaths& into, const corpus::ResourcePaths& from) {
  if (into.embeddings.empty()) into.embeddings = from.embeddings;
  if (into.lexicon.empty()) into.lexicon = from.lexicon;
  if (into.stopwords.empty()) into.stopwords = from.stopwords;
  if (into.gazetteer.empty()) into.gazetteer = from.gazetteer;
}

}  // namespace retriever
