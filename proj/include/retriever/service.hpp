#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "retriever/ranker.hpp"

namespace httplib {
class Server;
}

namespace retriever {

inline constexpr int kDefaultTopK = 3;
inline constexpr int kMaxTopK = 50;

struct HttpResponse {
  int status = 200;
  std::string body;  // application/json
};

/// Request handling for the query service, independent of the transport.
///
/// The live (corpus, index) pair is a shared_ptr<const Retriever>; each query
/// copies the pointer once and answers entirely from that snapshot, and a
/// reindex builds a new Retriever before swapping the pointer. A response
/// therefore always reflects exactly one corpus version.
class Service {
 public:
  explicit Service(std::shared_ptr<const Resources> resources, RankingConfig ranking = {});

  /// Makes `store` live. Its version is bumped past the current one if needed.
  void install(corpus::CorpusStore store);

  HttpResponse handle_query(const std::string& body) const;
  HttpResponse handle_health() const;
  /// Body {"manifest": path}. 409 while another reindex runs.
  HttpResponse handle_reindex(const std::string& body);

  std::shared_ptr<const Retriever> snapshot() const;

 private:
  std::shared_ptr<const Resources> resources_;
  RankingConfig ranking_;
  mutable std::mutex live_mu_;
  std::shared_ptr<const Retriever> live_;
  std::mutex reindex_mu_;
};

/// cpp-httplib transport for a Service:
///   POST /v1/query, GET /v1/health, POST /v1/reindex.
class HttpServer {
 public:
  explicit HttpServer(Service& service, std::string static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving. Port 0 picks a free port; returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Blocks.
  void run();
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

std::string error_body(const std::string& code, const std::string& message);

/// The QueryResponse document for `results` (without latency_ms).
std::string render_query_response(const Retriever& retriever,
                                  const QueryRepresentation& query,
                                  const std::vector<HybridResult>& results, Mode mode);

}  // namespace retriever
