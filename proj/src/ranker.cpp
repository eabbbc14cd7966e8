#include "retriever/ranker.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "retriever/error.hpp"

namespace retriever {

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::kHybrid: return "hybrid";
    case Mode::kBm25: return "bm25";
    case Mode::kEmbedding: return "embedding";
  }
  return "hybrid";
}

std::optional<Mode> parse_mode(std::string_view name) noexcept {
  if (name == "hybrid") return Mode::kHybrid;
  if (name == "bm25") return Mode::kBm25;
  if (name == "embedding") return Mode::kEmbedding;
  return std::nullopt;
}

std::shared_ptr<const Resources> Resources::load(const corpus::ResourcePaths& paths) {
  auto r = std::make_shared<Resources>();
  r->pipeline.lexicon = text::Lexicon::load(paths.lexicon);
  r->pipeline.stopwords = text::StopwordSet::load(paths.stopwords);
  r->embeddings = embed::EmbeddingTable::load(paths.embeddings);
  r->gazetteer = Gazetteer::load(paths.gazetteer);
  r->gazetteer.compile(r->pipeline.lexicon);
  r->paths = paths;
  return r;
}

QueryRepresentation process_query(std::string_view raw,
                                  const text::TextPipeline& pipeline,
                                  const embed::EmbeddingTable& embeddings,
                                  const Gazetteer& gazetteer) {
  QueryRepresentation q;
  q.raw = std::string(raw);
  q.tokens = pipeline.query_tokens(raw);
  if (q.tokens.empty()) throw Error(ErrorCode::kEmptyQuery, "query is empty");
  q.keywords = pipeline.query_keywords(q.tokens);
  if (q.keywords.empty()) {
    throw Error(ErrorCode::kEmptyQuery, "query has no keywords after processing");
  }
  q.vector = embed::embed_keywords(q.keywords, embeddings);
  q.detected_countries = gazetteer.detect(q.tokens);
  return q;
}

RankedList heading_rank(const QueryRepresentation& query, const Candidates& docs) {
  RankedList list;
  list.reserve(docs.size());
  for (const auto* d : docs) {
    list.push_back({d->doc_id, embed::cosine(query.vector.values, d->heading_vector)});
  }
  sort_ranked(list);
  return list;
}

RankedList content_rank(const QueryRepresentation& query, const bm25::Index& index) {
  return index.rank(query.keywords);
}

std::vector<HybridResult> borda_aggregate(const RankedList& heading,
                                          const RankedList& content) {
  const std::size_t n = heading.size();
  if (content.size() != n) {
    throw Error(ErrorCode::kRankMismatch, "rankings have different lengths");
  }
  std::unordered_map<std::string_view, std::size_t> content_pos;
  content_pos.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!content_pos.emplace(content[i].doc_id, i).second) {
      throw Error(ErrorCode::kRankMismatch, "duplicate id in content ranking: " +
                                                content[i].doc_id);
    }
  }

  std::vector<HybridResult> out;
  out.reserve(n);
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& h = heading[i];
    auto it = content_pos.find(h.doc_id);
    if (it == content_pos.end() || !seen.insert(h.doc_id).second) {
      throw Error(ErrorCode::kRankMismatch, "rankings cover different documents");
    }
    const std::size_t hp = i + 1;
    const std::size_t cp = it->second + 1;
    HybridResult r;
    r.doc_id = h.doc_id;
    r.heading_rank = static_cast<int>(hp);
    r.content_rank = static_cast<int>(cp);
    r.borda_points = static_cast<int>((n - hp) + (n - cp));
    r.heading_score = h.score;
    r.content_score = content[it->second].score;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const HybridResult& a, const HybridResult& b) {
    if (a.borda_points != b.borda_points) return a.borda_points > b.borda_points;
    if (a.heading_rank != b.heading_rank) return a.heading_rank < b.heading_rank;
    return a.doc_id < b.doc_id;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].final_rank = static_cast<int>(i + 1);
  return out;
}

Candidates filter_candidates(const QueryRepresentation& query, const Candidates& docs) {
  if (query.detected_countries.empty()) return docs;
  const std::unordered_set<std::string> wanted(query.detected_countries.begin(),
                                               query.detected_countries.end());
  Candidates out;
  for (const auto* d : docs) {
    if (wanted.count(d->country)) out.push_back(d);
  }
  return out.empty() ? docs : out;
}

bm25::Index build_content_index(const Candidates& docs, const bm25::Params& params) {
  std::vector<bm25::DocTokens> tokens;
  tokens.reserve(docs.size());
  for (const auto* d : docs) tokens.push_back({d->doc_id, d->content_tokens});
  return bm25::Index::build(tokens, params);
}

// ---------------------------------------------------------------------------
// Retriever

namespace {

Candidates all_documents(const corpus::CorpusStore& store) {
  Candidates out;
  out.reserve(store.documents.size());
  for (const auto& d : store.documents) out.push_back(&d);
  return out;
}

// Single-signal results, shaped like fused ones: one list of Borda points.
std::vector<HybridResult> single_mode(const RankedList& list, Mode mode) {
  const std::size_t n = list.size();
  std::vector<HybridResult> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    HybridResult r;
    r.doc_id = list[i].doc_id;
    r.final_rank = static_cast<int>(i + 1);
    r.borda_points = static_cast<int>(n - (i + 1));
    if (mode == Mode::kBm25) {
      r.content_rank = r.final_rank;
      r.content_score = list[i].score;
    } else {
      r.heading_rank = r.final_rank;
      r.heading_score = list[i].score;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Retriever::Retriever(std::shared_ptr<const Resources> resources,
                     corpus::CorpusStore store, RankingConfig config)
    : resources_(std::move(resources)), store_(std::move(store)), config_(config) {
  if (!resources_) throw Error(ErrorCode::kInvalidArgument, "retriever needs resources");
  if (store_.documents.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "retriever needs a nonempty corpus");
  }
  if (store_.embedding_dim != resources_->embeddings.dim()) {
    throw Error(ErrorCode::kDimension,
                "index embedding_dim " + std::to_string(store_.embedding_dim) +
                    " does not match embeddings dimension " +
                    std::to_string(resources_->embeddings.dim()));
  }
  all_ = all_documents(store_);
  index_ = build_content_index(all_, config_.bm25);
  for (std::size_t i = 0; i < store_.documents.size(); ++i) {
    by_id_.emplace(store_.documents[i].doc_id, i);
  }
}

const corpus::ProcessedDocument* Retriever::find(const std::string& doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &store_.documents[it->second];
}

QueryRepresentation Retriever::process(std::string_view raw_query) const {
  return process_query(raw_query, resources_->pipeline, resources_->embeddings,
                       resources_->gazetteer);
}

RankedList Retriever::content_ranking(const QueryRepresentation& query,
                                      const Candidates& candidates) const {
  if (candidates.size() == all_.size()) return content_rank(query, index_);
  if (config_.global_stats) {
    std::vector<std::string> ids;
    ids.reserve(candidates.size());
    for (const auto* d : candidates) ids.push_back(d->doc_id);
    return index_.rank(query.keywords, ids);
  }
  return content_rank(query, build_content_index(candidates, config_.bm25));
}

std::vector<HybridResult> Retriever::retrieve(std::string_view raw_query, std::size_t k,
                                              Mode mode) const {
  return retrieve(process(raw_query), k, mode);
}

std::vector<HybridResult> Retriever::retrieve(const QueryRepresentation& query,
                                              std::size_t k, Mode mode) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const auto candidates = filter_candidates(query, all_);

  std::vector<HybridResult> results;
  switch (mode) {
    case Mode::kHybrid:
      results = borda_aggregate(heading_rank(query, candidates),
                                content_ranking(query, candidates));
      break;
    case Mode::kBm25:
      results = single_mode(content_ranking(query, candidates), mode);
      break;
    case Mode::kEmbedding:
      results = single_mode(heading_rank(query, candidates), mode);
      break;
  }
  if (results.size() > k) results.resize(k);
  return results;
}

}  // namespace retriever
