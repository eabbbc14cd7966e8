#include "retriever/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "retriever/error.hpp"

namespace retriever {

void sort_ranked(RankedList& list) {
  std::sort(list.begin(), list.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
}

namespace bm25 {

void validate(const Params& params) {
  if (!(params.k1 >= 0.0) || !(params.b >= 0.0 && params.b <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bm25 parameters out of range (need k1 >= 0, 0 <= b <= 1)");
  }
}

Index Index::build(std::span<const DocTokens> docs, Params params) {
  validate(params);
  if (docs.empty()) throw Error(ErrorCode::kEmptyCorpus, "cannot index an empty corpus");

  std::vector<const DocTokens*> sorted;
  sorted.reserve(docs.size());
  for (const auto& d : docs) sorted.push_back(&d);
  std::sort(sorted.begin(), sorted.end(),
            [](const DocTokens* a, const DocTokens* b) { return a->doc_id < b->doc_id; });

  Index index;
  index.params_ = params;
  index.doc_ids_.reserve(sorted.size());
  index.doc_len_.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& doc = *sorted[i];
    if (i > 0 && doc.doc_id == sorted[i - 1]->doc_id) {
      throw Error(ErrorCode::kDuplicateDoc, "duplicate doc_id: " + doc.doc_id);
    }
    const auto ord = static_cast<std::uint32_t>(i);
    index.doc_ids_.push_back(doc.doc_id);
    index.doc_len_.push_back(static_cast<std::uint32_t>(doc.tokens.size()));
    index.ordinal_.emplace(doc.doc_id, ord);

    std::unordered_map<std::string, std::uint32_t> tf;
    for (const auto& t : doc.tokens) ++tf[t];
    for (auto& [term, count] : tf) {
      index.postings_[term].push_back({ord, count});
    }
  }
  // Ordinals were appended in increasing order, so each postings list is sorted.
  const double total =
      std::accumulate(index.doc_len_.begin(), index.doc_len_.end(), 0.0);
  index.avg_doc_len_ = total / static_cast<double>(index.doc_len_.size());
  return index;
}

std::size_t Index::ordinal(const std::string& doc_id) const {
  auto it = ordinal_.find(doc_id);
  if (it == ordinal_.end()) throw Error(ErrorCode::kUnknownDoc, "unknown doc_id: " + doc_id);
  return it->second;
}

std::size_t Index::doc_len(const std::string& doc_id) const {
  return doc_len_[ordinal(doc_id)];
}

std::size_t Index::doc_freq(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? 0 : it->second.size();
}

std::size_t Index::term_freq(const std::string& term, const std::string& doc_id) const {
  const auto ord = ordinal(doc_id);
  auto it = postings_.find(term);
  if (it == postings_.end()) return 0;
  auto p = std::lower_bound(it->second.begin(), it->second.end(), ord,
                            [](const Posting& a, std::size_t o) { return a.doc < o; });
  return (p != it->second.end() && p->doc == ord) ? p->tf : 0;
}

std::vector<std::string> Index::terms() const {
  std::vector<std::string> out;
  out.reserve(postings_.size());
  for (const auto& [term, _] : postings_) out.push_back(term);
  std::sort(out.begin(), out.end());
  return out;
}

double Index::idf(const std::string& term) const {
  const double n = static_cast<double>(n_docs());
  const double df = static_cast<double>(doc_freq(term));
  return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

double Index::term_weight(double idf, std::uint32_t tf, std::uint32_t dl) const {
  const double k1 = params_.k1;
  const double b = params_.b;
  // avg_doc_len is 0 only if every document is empty, in which case no term
  // has a posting and this is never reached.
  const double norm = 1.0 - b + b * static_cast<double>(dl) / avg_doc_len_;
  const double f = static_cast<double>(tf);
  return idf * f * (k1 + 1.0) / (f + k1 * norm);
}

std::vector<std::string> Index::distinct(const std::vector<std::string>& terms) const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& t : terms) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

double Index::score(const std::vector<std::string>& query_terms,
                    const std::string& doc_id) const {
  const auto ord = ordinal(doc_id);
  double total = 0.0;
  for (const auto& term : distinct(query_terms)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    auto p = std::lower_bound(it->second.begin(), it->second.end(), ord,
                              [](const Posting& a, std::size_t o) { return a.doc < o; });
    if (p == it->second.end() || p->doc != ord) continue;
    total += term_weight(idf(term), p->tf, doc_len_[ord]);
  }
  return total;
}

std::vector<double> Index::score_all(const std::vector<std::string>& query_terms) const {
  std::vector<double> scores(n_docs(), 0.0);
  for (const auto& term : distinct(query_terms)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double w = idf(term);
    for (const auto& p : it->second) {
      scores[p.doc] += term_weight(w, p.tf, doc_len_[p.doc]);
    }
  }
  return scores;
}

RankedList Index::rank(const std::vector<std::string>& query_terms) const {
  const auto scores = score_all(query_terms);
  RankedList list;
  list.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) list.push_back({doc_ids_[i], scores[i]});
  sort_ranked(list);
  return list;
}

RankedList Index::rank(const std::vector<std::string>& query_terms,
                       std::span<const std::string> subset) const {
  const auto scores = score_all(query_terms);
  RankedList list;
  list.reserve(subset.size());
  for (const auto& id : subset) list.push_back({id, scores[ordinal(id)]});
  sort_ranked(list);
  return list;
}

}  // namespace bm25
}  // namespace retriever
