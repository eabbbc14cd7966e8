#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "retriever/bm25.hpp"
#include "retriever/corpus.hpp"
#include "retriever/embeddings.hpp"
#include "retriever/gazetteer.hpp"
#include "retriever/thai_text.hpp"

namespace retriever {

enum class Mode { kHybrid, kBm25, kEmbedding };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view name) noexcept;

/// One fused result. Ranks are 1-based; a rank of 0 means that signal was not
/// computed (single-mode retrieval).
struct HybridResult {
  std::string doc_id;
  int borda_points = 0;
  int heading_rank = 0;
  int content_rank = 0;
  int final_rank = 0;
  double heading_score = 0.0;
  double content_score = 0.0;

  bool operator==(const HybridResult&) const = default;
};

struct QueryRepresentation {
  std::string raw;
  std::vector<std::string> tokens;    // normalized, segmented, before filtering
  std::vector<std::string> keywords;  // keyword-tagged, stopwords removed
  embed::PooledVector vector;
  std::vector<std::string> detected_countries;
};

/// Everything a query needs besides the corpus itself.
struct Resources {
  text::TextPipeline pipeline;
  embed::EmbeddingTable embeddings;
  Gazetteer gazetteer;
  corpus::ResourcePaths paths;

  /// Loads all four files and compiles the gazetteer against the lexicon.
  static std::shared_ptr<const Resources> load(const corpus::ResourcePaths& paths);
};

struct RankingConfig {
  bm25::Params bm25;
  // Score filtered candidates with whole-corpus statistics instead of
  // re-indexing the candidate subset.
  bool global_stats = false;
};

using Candidates = std::vector<const corpus::ProcessedDocument*>;

/// Throws kEmptyQuery when nothing keyword-like survives processing.
QueryRepresentation process_query(std::string_view raw,
                                  const text::TextPipeline& pipeline,
                                  const embed::EmbeddingTable& embeddings,
                                  const Gazetteer& gazetteer);

/// Descending cosine between the query vector and each heading vector.
RankedList heading_rank(const QueryRepresentation& query, const Candidates& docs);

RankedList content_rank(const QueryRepresentation& query, const bm25::Index& index);

/// Borda fusion: (n - position) points per list, ties to the better heading
/// rank and then the smaller doc_id. Throws kRankMismatch unless both lists
/// are permutations of the same ids.
std::vector<HybridResult> borda_aggregate(const RankedList& heading,
                                          const RankedList& content);

/// Documents of the detected countries, or all documents when nothing was
/// detected or the detected countries have no documents.
Candidates filter_candidates(const QueryRepresentation& query, const Candidates& docs);

/// An immutable (corpus, index) pair plus the resources to process queries.
class Retriever {
 public:
  Retriever(std::shared_ptr<const Resources> resources, corpus::CorpusStore store,
            RankingConfig config = {});
  // Holds pointers into its own document list.
  Retriever(const Retriever&) = delete;
  Retriever& operator=(const Retriever&) = delete;
  Retriever(Retriever&&) = default;

  /// Up to k results, best first. Throws kEmptyQuery, kInvalidArgument (k < 1).
  std::vector<HybridResult> retrieve(std::string_view raw_query, std::size_t k,
                                     Mode mode = Mode::kHybrid) const;
  std::vector<HybridResult> retrieve(const QueryRepresentation& query, std::size_t k,
                                     Mode mode = Mode::kHybrid) const;

  QueryRepresentation process(std::string_view raw_query) const;

  const corpus::CorpusStore& store() const noexcept { return store_; }
  const bm25::Index& index() const noexcept { return index_; }
  const Resources& resources() const noexcept { return *resources_; }
  const std::shared_ptr<const Resources>& shared_resources() const noexcept {
    return resources_;
  }
  const RankingConfig& config() const noexcept { return config_; }
  const corpus::ProcessedDocument* find(const std::string& doc_id) const;

 private:
  RankedList content_ranking(const QueryRepresentation& query,
                             const Candidates& candidates) const;

  std::shared_ptr<const Resources> resources_;
  corpus::CorpusStore store_;
  RankingConfig config_;
  bm25::Index index_;
  Candidates all_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

bm25::Index build_content_index(const Candidates& docs, const bm25::Params& params);

}  // namespace retriever
