#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace retriever {

struct RankedEntry {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

/// Descending score, ties by ascending doc_id. Every candidate appears once.
using RankedList = std::vector<RankedEntry>;

// Sorts in place into RankedList order.
void sort_ranked(RankedList& list);

namespace bm25 {

struct Params {
  double k1 = 1.5;
  double b = 0.75;
};

// Throws kInvalidArgument unless k1 >= 0 and 0 <= b <= 1.
void validate(const Params& params);

struct DocTokens {
  std::string doc_id;
  std::vector<std::string> tokens;
};

/// Inverted index over content tokens.
///
/// Documents are addressed internally by ordinal in ascending doc_id order, so
/// the index layout (and every ranking derived from it) does not depend on the
/// order documents were supplied in.
class Index {
 public:
  struct Posting {
    std::uint32_t doc;
    std::uint32_t tf;
  };

  /// Throws kDuplicateDoc on a repeated id and kEmptyCorpus on no documents.
  static Index build(std::span<const DocTokens> docs, Params params = {});

  std::size_t n_docs() const noexcept { return doc_ids_.size(); }
  double avg_doc_len() const noexcept { return avg_doc_len_; }
  const Params& params() const noexcept { return params_; }

  /// Throws kUnknownDoc.
  std::size_t doc_len(const std::string& doc_id) const;
  std::size_t doc_freq(const std::string& term) const;
  std::size_t term_freq(const std::string& term, const std::string& doc_id) const;
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  std::vector<std::string> terms() const;

  double idf(const std::string& term) const;

  /// Sum over distinct query terms present in the document. Throws kUnknownDoc.
  double score(const std::vector<std::string>& query_terms,
               const std::string& doc_id) const;

  /// Scores for every document, indexed like doc_ids().
  std::vector<double> score_all(const std::vector<std::string>& query_terms) const;

  RankedList rank(const std::vector<std::string>& query_terms) const;
  /// Ranks only `subset` (which must be indexed ids) against the full-corpus
  /// statistics.
  RankedList rank(const std::vector<std::string>& query_terms,
                  std::span<const std::string> subset) const;

 private:
  std::size_t ordinal(const std::string& doc_id) const;
  double term_weight(double idf, std::uint32_t tf, std::uint32_t dl) const;
  std::vector<std::string> distinct(const std::vector<std::string>& terms) const;

  Params params_;
  double avg_doc_len_ = 0.0;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_len_;
  std::unordered_map<std::string, std::uint32_t> ordinal_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
};

}  // namespace bm25
}  // namespace retriever
