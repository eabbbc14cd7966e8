// Command-line front end. Talks to the library only through retriever.h.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "retriever/retriever.h"

namespace {

struct CString {
  char* p = nullptr;
  ~CString() { rtv_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

int fail(rtv_status status) {
  std::cerr << "error [" << rtv_status_name(status) << "]: " << rtv_last_error() << "\n";
  return 1;
}

const char* c_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

rtv_mode to_mode(const std::string& name) {
  if (name == "bm25") return RTV_MODE_BM25;
  if (name == "embedding") return RTV_MODE_EMBEDDING;
  return RTV_MODE_HYBRID;
}

using Engine = std::unique_ptr<rtv_engine, decltype(&rtv_engine_free)>;

void print_results(const std::string& json_text) {
  const auto doc = nlohmann::json::parse(json_text);
  const auto& countries = doc.at("detected_countries");
  if (!countries.empty()) std::cout << "countries: " << countries.dump() << "\n";
  for (const auto& r : doc.at("results")) {
    std::cout << r.at("final_rank").get<int>() << ". " << r.at("heading").get<std::string>()
              << "  [" << r.at("doc_id").get<std::string>() << ", "
              << r.at("country").get<std::string>() << "]\n";
    auto rank = [](const nlohmann::json& v) { return v.is_null() ? std::string("-") : v.dump(); };
    std::cout << "   heading rank " << rank(r.at("heading_rank")) << ", content rank "
              << rank(r.at("content_rank")) << ", points " << r.at("borda_points").dump()
              << "\n";
    const auto& uri = r.at("uri");
    if (!uri.is_null()) std::cout << "   " << uri.get<std::string>() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid BM25 + heading-embedding document retriever"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "JSON config file (default: $RETRIEVER_CONFIG)");

  // ingest
  rtv_ingest_options ingest{};
  std::string manifest, embeddings, lexicon, stopwords, gazetteer, out_index;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build an index from a corpus manifest");
  ingest_cmd->add_option("--manifest", manifest)->required();
  ingest_cmd->add_option("--embeddings", embeddings)->required();
  ingest_cmd->add_option("--lexicon", lexicon)->required();
  ingest_cmd->add_option("--stopwords", stopwords)->required();
  ingest_cmd->add_option("--gazetteer", gazetteer)->required();
  ingest_cmd->add_option("--out", out_index)->required();

  // serve
  std::string serve_index, host;
  int port = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP query service");
  serve_cmd->add_option("--index", serve_index);
  serve_cmd->add_option("--port", port, "0 picks a free port");
  serve_cmd->add_option("--host", host);

  // query
  std::string query_index, mode = "hybrid", text;
  int top_k = 3;
  bool as_json = false;
  auto* query_cmd = app.add_subcommand("query", "Run one query against an index");
  query_cmd->add_option("--index", query_index)->required();
  query_cmd->add_option("--mode", mode)->check(CLI::IsMember({"hybrid", "bm25", "embedding"}));
  query_cmd->add_option("--top-k", top_k)->check(CLI::Range(1, 50));
  query_cmd->add_flag("--json", as_json);
  query_cmd->add_option("text", text)->required();

  // eval
  std::string eval_index, pairs, eval_mode;
  bool eval_json = false;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy and latency per ranking mode");
  eval_cmd->add_option("--index", eval_index)->required();
  eval_cmd->add_option("--pairs", pairs)->required();
  eval_cmd->add_option("--mode", eval_mode)->check(CLI::IsMember({"hybrid", "bm25", "embedding"}));
  eval_cmd->add_flag("--json", eval_json);

  CLI11_PARSE(app, argc, argv);

  if (*ingest_cmd) {
    ingest = {manifest.c_str(), embeddings.c_str(), lexicon.c_str(),
              stopwords.c_str(), gazetteer.c_str(), out_index.c_str()};
    CString report;
    if (auto s = rtv_ingest(&ingest, &report.p); s != RTV_OK) return fail(s);
    std::cout << report.str() << "\n";
    return 0;
  }

  if (*serve_cmd) {
    // Block the shutdown signals before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    rtv_server* raw = nullptr;
    if (auto s = rtv_server_create(c_or_null(serve_index), c_or_null(config), &raw);
        s != RTV_OK) {
      return fail(s);
    }
    std::unique_ptr<rtv_server, decltype(&rtv_server_free)> server(raw, rtv_server_free);
    int bound = 0;
    if (auto s = rtv_server_bind(server.get(), c_or_null(host), port, &bound); s != RTV_OK) {
      return fail(s);
    }
    std::cout << "listening on port " << bound << std::endl;
    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      rtv_server_stop(server.get());
    });
    const auto status = rtv_server_run(server.get());
    // Wake the waiter if the server ended on its own.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return status == RTV_OK ? 0 : fail(status);
  }

  const std::string& index = *query_cmd ? query_index : eval_index;
  rtv_engine* raw = nullptr;
  if (auto s = rtv_engine_open(index.c_str(), c_or_null(config), &raw); s != RTV_OK) {
    return fail(s);
  }
  Engine engine(raw, rtv_engine_free);

  if (*query_cmd) {
    CString out;
    if (auto s = rtv_engine_query(engine.get(), text.c_str(), to_mode(mode), top_k, &out.p);
        s != RTV_OK) {
      return fail(s);
    }
    if (as_json) {
      std::cout << out.str() << "\n";
    } else {
      print_results(out.str());
    }
    return 0;
  }

  unsigned mask = RTV_EVAL_ALL;
  if (eval_mode == "bm25") mask = RTV_EVAL_BM25;
  if (eval_mode == "embedding") mask = RTV_EVAL_EMBEDDING;
  if (eval_mode == "hybrid") mask = RTV_EVAL_HYBRID;
  CString json_out, table_out;
  if (auto s = rtv_engine_evaluate(engine.get(), pairs.c_str(), mask, &json_out.p,
                                   &table_out.p);
      s != RTV_OK) {
    return fail(s);
  }
  std::cout << (eval_json ? json_out.str() + "\n" : table_out.str());
  return 0;
}
