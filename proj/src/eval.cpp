#include "retriever/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "retriever/error.hpp"

namespace retriever::eval {

namespace {

std::string_view approach_label(Mode mode) {
  switch (mode) {
    case Mode::kBm25: return "BM25 (content)";
    case Mode::kEmbedding: return "Embedding (headings)";
    case Mode::kHybrid: return "Hybrid (Borda)";
  }
  return "";
}

}  // namespace

std::vector<EvalPair> parse_pairs(std::istream& in) {
  std::vector<EvalPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  "pairs line " + std::to_string(line_no) + ": expected query<TAB>doc_id");
    }
    EvalPair p{line.substr(0, tab), line.substr(tab + 1)};
    if (p.relevant_doc_id.find('\t') != std::string::npos || p.query.empty() ||
        p.relevant_doc_id.empty()) {
      throw Error(ErrorCode::kParse,
                  "pairs line " + std::to_string(line_no) + ": expected query<TAB>doc_id");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void check_pairs(const std::vector<EvalPair>& pairs, const Retriever& retriever) {
  std::vector<std::string> missing;
  for (const auto& p : pairs) {
    if (retriever.find(p.relevant_doc_id) == nullptr) missing.push_back(p.relevant_doc_id);
  }
  if (missing.empty()) return;
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  std::string list;
  for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
  throw Error(ErrorCode::kUnknownDoc, "pairs reference unknown documents: " + list);
}

std::vector<EvalPair> load_pairs(const std::filesystem::path& path,
                                 const Retriever& retriever) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open pairs file: " + path.string());
  auto pairs = parse_pairs(in);
  check_pairs(pairs, retriever);
  return pairs;
}

ModeReport evaluate(const std::vector<EvalPair>& pairs, Mode mode,
                    const Retriever& retriever) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyEval, "no evaluation pairs");
  ModeReport row;
  row.mode = mode;
  row.n_queries = pairs.size();
  std::vector<double> latencies;
  latencies.reserve(pairs.size());
  for (const auto& p : pairs) {
    std::vector<HybridResult> results;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      results = retriever.retrieve(p.query, 3, mode);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyQuery) throw;
      ++row.empty_queries;
      continue;
    }
    const auto t1 = std::chrono::steady_clock::now();
    latencies.push_back(std::chrono::duration<double>(t1 - t0).count());
    for (const auto& r : results) {
      if (r.doc_id != p.relevant_doc_id) continue;
      if (r.final_rank == 1) ++row.hits_at_1;
      ++row.hits_at_3;
    }
  }
  const double n = static_cast<double>(row.n_queries);
  row.accuracy_at_1 = static_cast<double>(row.hits_at_1) / n;
  row.accuracy_at_3 = static_cast<double>(row.hits_at_3) / n;
  if (!latencies.empty()) {
    row.mean_latency_s = std::accumulate(latencies.begin(), latencies.end(), 0.0) /
                         static_cast<double>(latencies.size());
    auto mid = latencies.begin() + static_cast<long>(latencies.size() / 2);
    std::nth_element(latencies.begin(), mid, latencies.end());
    row.p50_latency_s = *mid;
  }
  return row;
}

EvalReport compare_modes(const std::vector<EvalPair>& pairs, const Retriever& retriever,
                         const std::vector<Mode>& modes) {
  EvalReport report;
  for (Mode m : modes) report.rows.push_back(evaluate(pairs, m, retriever));
  return report;
}

std::string format_table(const EvalReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %16s %16s %20s\n", "Approach",
                "Accuracy@1 (%)", "Accuracy@3 (%)", "Mean time (seconds)");
  out += line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-22s %16.4f %16.4f %20.6f\n",
                  std::string(approach_label(r.mode)).c_str(), r.accuracy_at_1 * 100.0,
                  r.accuracy_at_3 * 100.0, r.mean_latency_s);
    out += line;
  }
  if (!report.rows.empty()) {
    std::snprintf(line, sizeof line, "queries: %zu", report.rows.front().n_queries);
    out += line;
    std::size_t empty = 0;
    for (const auto& r : report.rows) empty = std::max(empty, r.empty_queries);
    if (empty > 0) {
      std::snprintf(line, sizeof line, " (%zu rejected as empty, counted as misses)", empty);
      out += line;
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const EvalReport& report, int indent) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({
        {"mode", std::string(to_string(r.mode))},
        {"n_queries", r.n_queries},
        {"hits_at_1", r.hits_at_1},
        {"hits_at_3", r.hits_at_3},
        {"empty_queries", r.empty_queries},
        {"accuracy_at_1", r.accuracy_at_1},
        {"accuracy_at_3", r.accuracy_at_3},
        {"mean_latency_s", r.mean_latency_s},
        {"p50_latency_s", r.p50_latency_s},
    });
  }
  return nlohmann::json{{"rows", std::move(rows)}}.dump(indent);
}

}  // namespace retriever::eval
