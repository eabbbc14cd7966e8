#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "retriever/ranker.hpp"

namespace retriever::eval {

struct EvalPair {
  std::string query;
  std::string relevant_doc_id;
};

/// TSV "query<TAB>doc_id"; blank and '#' lines skipped. Throws kParse with the
/// line number.
std::vector<EvalPair> parse_pairs(std::istream& in);
/// parse_pairs plus a check that every doc id is in the retriever's corpus
/// (kUnknownDoc listing the offenders).
std::vector<EvalPair> load_pairs(const std::filesystem::path& path,
                                 const Retriever& retriever);
void check_pairs(const std::vector<EvalPair>& pairs, const Retriever& retriever);

struct ModeReport {
  Mode mode = Mode::kHybrid;
  std::size_t n_queries = 0;
  std::size_t hits_at_1 = 0;
  std::size_t hits_at_3 = 0;
  // Queries rejected as empty; they count as misses.
  std::size_t empty_queries = 0;
  double accuracy_at_1 = 0.0;
  double accuracy_at_3 = 0.0;
  double mean_latency_s = 0.0;
  double p50_latency_s = 0.0;
};

struct EvalReport {
  std::vector<ModeReport> rows;
};

/// Runs every pair sequentially, timing only the retrieval call. Throws
/// kEmptyEval for no pairs.
ModeReport evaluate(const std::vector<EvalPair>& pairs, Mode mode,
                    const Retriever& retriever);

/// bm25, embedding, hybrid, in that order, over identical pairs.
EvalReport compare_modes(const std::vector<EvalPair>& pairs, const Retriever& retriever,
                         const std::vector<Mode>& modes = {Mode::kBm25, Mode::kEmbedding,
                                                          Mode::kHybrid});

std::string format_table(const EvalReport& report);
std::string to_json(const EvalReport& report, int indent = -1);

}  // namespace retriever::eval
