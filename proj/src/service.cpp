#include "retriever/service.hpp"

#include <chrono>

#ifndef CPPHTTPLIB_LISTEN_BACKLOG
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "retriever/error.hpp"

namespace retriever {

using nlohmann::json;

namespace {

HttpResponse error_response(int status, const std::string& code,
                            const std::string& message) {
  return {status, error_body(code, message)};
}

json rank_or_null(int rank) { return rank > 0 ? json(rank) : json(nullptr); }

json query_response(const Retriever& retriever, const QueryRepresentation& query,
                    const std::vector<HybridResult>& results, Mode mode) {
  json items = json::array();
  for (const auto& r : results) {
    const auto* doc = retriever.find(r.doc_id);
    items.push_back({
        {"doc_id", r.doc_id},
        {"heading", doc->heading},
        {"country", doc->country},
        {"snippet", doc->snippet},
        {"uri", doc->uri.empty() ? json(nullptr) : json(doc->uri)},
        {"heading_rank", rank_or_null(r.heading_rank)},
        {"content_rank", rank_or_null(r.content_rank)},
        {"borda_points", r.borda_points},
        {"final_rank", r.final_rank},
    });
  }
  return {
      {"results", std::move(items)},
      {"detected_countries", query.detected_countries},
      {"mode", std::string(to_string(mode))},
      {"version", retriever.store().version},
  };
}

}  // namespace

std::string render_query_response(const Retriever& retriever,
                                  const QueryRepresentation& query,
                                  const std::vector<HybridResult>& results, Mode mode) {
  return query_response(retriever, query, results, mode).dump();
}

std::string error_body(const std::string& code, const std::string& message) {
  return json{{"error", code}, {"message", message}}.dump();
}

Service::Service(std::shared_ptr<const Resources> resources, RankingConfig ranking)
    : resources_(std::move(resources)), ranking_(ranking) {
  if (!resources_) throw Error(ErrorCode::kInvalidArgument, "service needs resources");
  bm25::validate(ranking_.bm25);
}

std::shared_ptr<const Retriever> Service::snapshot() const {
  std::lock_guard lock(live_mu_);
  return live_;
}

void Service::install(corpus::CorpusStore store) {
  if (auto current = snapshot(); current && store.version <= current->store().version) {
    store.version = current->store().version + 1;
  }
  auto next = std::make_shared<const Retriever>(resources_, std::move(store), ranking_);
  std::lock_guard lock(live_mu_);
  live_ = std::move(next);
}

HttpResponse Service::handle_query(const std::string& body) const {
  const auto started = std::chrono::steady_clock::now();

  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error& e) {
    return error_response(400, "bad_request", std::string("invalid JSON: ") + e.what());
  }
  if (!req.is_object()) return error_response(400, "bad_request", "body must be an object");

  auto text_it = req.find("text");
  if (text_it == req.end() || !text_it->is_string()) {
    return error_response(400, "bad_request", "\"text\" must be a string");
  }
  const auto text = text_it->get<std::string>();
  if (text::normalize(text).empty()) {
    return error_response(400, "empty_query", "query text is blank");
  }

  int top_k = kDefaultTopK;
  if (auto it = req.find("top_k"); it != req.end()) {
    if (!it->is_number_integer()) {
      return error_response(400, "bad_top_k", "top_k must be an integer");
    }
    const auto value = it->get<long long>();
    if (value < 1 || value > kMaxTopK) {
      return error_response(400, "bad_top_k", "top_k must be between 1 and " +
                                                  std::to_string(kMaxTopK));
    }
    top_k = static_cast<int>(value);
  }

  Mode mode = Mode::kHybrid;
  if (auto it = req.find("mode"); it != req.end()) {
    const auto parsed = it->is_string() ? parse_mode(it->get<std::string>()) : std::nullopt;
    if (!parsed) {
      return error_response(400, "bad_mode", "mode must be hybrid, bm25 or embedding");
    }
    mode = *parsed;
  }

  const auto live = snapshot();
  if (!live) return error_response(503, "no_index", "no corpus is loaded");

  try {
    const auto query = live->process(text);
    const auto results = live->retrieve(query, static_cast<std::size_t>(top_k), mode);
    auto out = query_response(*live, query, results, mode);
    const auto elapsed = std::chrono::steady_clock::now() - started;
    out["latency_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
    return {200, out.dump()};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyQuery) {
      return error_response(400, "empty_query", e.what());
    }
    return error_response(500, std::string(error_code_name(e.code())), e.what());
  }
}

HttpResponse Service::handle_health() const {
  const auto live = snapshot();
  json out = {
      {"status", "ok"},
      {"documents", live ? live->store().documents.size() : 0},
      {"version", live ? live->store().version : 0},
      {"embedding_dim", resources_->embeddings.dim()},
  };
  return {200, out.dump()};
}

HttpResponse Service::handle_reindex(const std::string& body) {
  std::unique_lock guard(reindex_mu_, std::try_to_lock);
  if (!guard.owns_lock()) {
    return error_response(409, "reindex_in_progress", "a reindex is already running");
  }

  std::string manifest;
  try {
    const auto req = json::parse(body);
    manifest = req.at("manifest").get<std::string>();
  } catch (const json::exception&) {
    return error_response(400, "bad_request", "body must be {\"manifest\": path}");
  }

  try {
    const auto parsed = corpus::parse_manifest(manifest, resources_->gazetteer);
    auto store = corpus::build_corpus(parsed, resources_->pipeline, resources_->embeddings);
    store.resources = resources_->paths;
    const auto current = snapshot();
    store.version = current ? current->store().version + 1 : 1;
    auto next = std::make_shared<const Retriever>(resources_, std::move(store), ranking_);
    const auto documents = next->store().documents.size();
    const auto version = next->store().version;
    {
      std::lock_guard lock(live_mu_);
      live_ = std::move(next);
    }
    return {200, json{{"documents", documents}, {"version", version}}.dump()};
  } catch (const Error& e) {
    return error_response(422, std::string(error_code_name(e.code())), e.what());
  }
}

// ---------------------------------------------------------------------------
// HTTP transport

HttpServer::HttpServer(Service& service, std::string static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  server_->Post("/v1/query", [this, reply](const httplib::Request& req,
                                           httplib::Response& res) {
    reply(res, service_.handle_query(req.body));
  });
  server_->Get("/v1/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service_.handle_health());
  });
  server_->Post("/v1/reindex", [this, reply](const httplib::Request& req,
                                             httplib::Response& res) {
    reply(res, service_.handle_reindex(req.body));
  });
  if (!static_dir.empty()) server_->set_mount_point("/", static_dir);
  server_->set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "unexpected failure";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(error_body("internal_error", message), "application/json");
      });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

}  // namespace retriever
