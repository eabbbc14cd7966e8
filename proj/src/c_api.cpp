#include "retriever/retriever.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "retriever/config.hpp"
#include "retriever/corpus.hpp"
#include "retriever/error.hpp"
#include "retriever/eval.hpp"
#include "retriever/ranker.hpp"
#include "retriever/service.hpp"

using namespace retriever;

struct rtv_engine {
  std::unique_ptr<Retriever> retriever;
};

struct rtv_server {
  std::unique_ptr<Service> service;
  std::unique_ptr<HttpServer> http;
  Config config;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
rtv_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return RTV_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<rtv_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RTV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return RTV_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

std::optional<std::string> opt(const char* s) {
  if (s == nullptr || *s == '\0') return std::nullopt;
  return std::string(s);
}

std::string absolute(const char* p) {
  return std::filesystem::absolute(p).lexically_normal().string();
}

std::shared_ptr<const Resources> load_resources(corpus::ResourcePaths paths,
                                                const corpus::ResourcePaths& fallback) {
  fill_missing(paths, fallback);
  if (paths.embeddings.empty() || paths.lexicon.empty() || paths.stopwords.empty() ||
      paths.gazetteer.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "resource paths (embeddings, lexicon, stopwords, gazetteer) are not "
                "configured");
  }
  return Resources::load(paths);
}

}  // namespace

extern "C" {

const char* rtv_last_error(void) { return g_last_error.c_str(); }

const char* rtv_status_name(rtv_status status) {
  // error_code_name returns views of string literals, so data() is terminated.
  return error_code_name(static_cast<ErrorCode>(status)).data();
}

void rtv_string_free(char* s) { std::free(s); }

rtv_status rtv_ingest(const rtv_ingest_options* options, char** report_json) {
  return guarded([&] {
    require(options != nullptr, "options is NULL");
    require(options->manifest && options->embeddings && options->lexicon &&
                options->stopwords && options->gazetteer && options->out_index,
            "every ingest option is required");
    corpus::ResourcePaths paths{absolute(options->embeddings), absolute(options->lexicon),
                                absolute(options->stopwords), absolute(options->gazetteer)};
    const auto resources = Resources::load(paths);
    const auto manifest = corpus::parse_manifest(options->manifest, resources->gazetteer);
    auto store = corpus::build_corpus(manifest, resources->pipeline, resources->embeddings);
    store.resources = paths;

    const std::filesystem::path out = options->out_index;
    store.version = 1;
    if (std::filesystem::exists(out)) {
      try {
        store.version = corpus::load_store(out).version + 1;
      } catch (const Error&) {
        // An unreadable previous index just restarts the version count.
      }
    }
    corpus::save_store(store, out);
    if (report_json != nullptr) {
      nlohmann::json report = {{"documents", store.documents.size()},
                               {"version", store.version},
                               {"index", out.string()}};
      *report_json = dup_string(report.dump());
    }
  });
}

rtv_status rtv_engine_open(const char* index_path, const char* config_path,
                           rtv_engine** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    const auto config = Config::resolve(opt(config_path));
    const auto path = opt(index_path).value_or(config.index);
    require(!path.empty(), "no index path given");
    auto store = corpus::load_store(path);
    auto resources = load_resources(config.resources, store.resources);
    auto engine = std::make_unique<rtv_engine>();
    engine->retriever =
        std::make_unique<Retriever>(std::move(resources), std::move(store), config.ranking);
    *out = engine.release();
  });
}

void rtv_engine_free(rtv_engine* engine) { delete engine; }

rtv_status rtv_engine_query(const rtv_engine* engine, const char* text, rtv_mode mode,
                            int top_k, char** out_json) {
  return guarded([&] {
    require(engine != nullptr && text != nullptr && out_json != nullptr,
            "NULL argument");
    require(top_k >= 1 && top_k <= kMaxTopK, "top_k must be between 1 and 50");
    require(mode >= RTV_MODE_HYBRID && mode <= RTV_MODE_EMBEDDING, "unknown mode");
    const auto& r = *engine->retriever;
    const auto m = static_cast<Mode>(mode);
    const auto query = r.process(text);
    const auto results = r.retrieve(query, static_cast<std::size_t>(top_k), m);
    *out_json = dup_string(render_query_response(r, query, results, m));
  });
}

rtv_status rtv_engine_document_count(const rtv_engine* engine, unsigned long* out_count) {
  return guarded([&] {
    require(engine != nullptr && out_count != nullptr, "NULL argument");
    *out_count = static_cast<unsigned long>(engine->retriever->store().documents.size());
  });
}

rtv_status rtv_engine_evaluate(const rtv_engine* engine, const char* pairs_path,
                               unsigned mode_mask, char** out_json, char** out_table) {
  return guarded([&] {
    require(engine != nullptr && pairs_path != nullptr, "NULL argument");
    std::vector<Mode> modes;
    if (mode_mask & RTV_EVAL_BM25) modes.push_back(Mode::kBm25);
    if (mode_mask & RTV_EVAL_EMBEDDING) modes.push_back(Mode::kEmbedding);
    if (mode_mask & RTV_EVAL_HYBRID) modes.push_back(Mode::kHybrid);
    require(!modes.empty(), "mode_mask selects no modes");
    const auto& r = *engine->retriever;
    const auto pairs = eval::load_pairs(pairs_path, r);
    const auto report = eval::compare_modes(pairs, r, modes);
    if (out_json != nullptr) *out_json = dup_string(eval::to_json(report, 2));
    if (out_table != nullptr) *out_table = dup_string(eval::format_table(report));
  });
}

rtv_status rtv_server_create(const char* index_path, const char* config_path,
                             rtv_server** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    auto server = std::make_unique<rtv_server>();
    server->config = Config::resolve(opt(config_path));
    const auto path = opt(index_path).value_or(server->config.index);

    std::optional<corpus::CorpusStore> store;
    corpus::ResourcePaths recorded;
    if (!path.empty()) {
      store = corpus::load_store(path);
      recorded = store->resources;
    }
    auto resources = load_resources(server->config.resources, recorded);
    server->service = std::make_unique<Service>(std::move(resources),
                                                server->config.ranking);
    if (store) server->service->install(std::move(*store));
    server->http = std::make_unique<HttpServer>(*server->service,
                                                server->config.static_dir);
    *out = server.release();
  });
}

rtv_status rtv_server_bind(rtv_server* server, const char* host, int port, int* out_port) {
  return guarded([&] {
    require(server != nullptr, "server is NULL");
    const std::string h = host ? host : server->config.host;
    const int p = port < 0 ? server->config.port : port;
    const int bound = server->http->bind(h, p);
    if (out_port != nullptr) *out_port = bound;
  });
}

rtv_status rtv_server_run(rtv_server* server) {
  return guarded([&] {
    require(server != nullptr, "server is NULL");
    server->http->run();
  });
}

void rtv_server_stop(rtv_server* server) {
  if (server != nullptr && server->http) server->http->stop();
}

void rtv_server_free(rtv_server* server) { delete server; }

}  // extern "C"
