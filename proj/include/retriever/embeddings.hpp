#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace retriever::embed {

using Vector = std::vector<double>;

/// Word vectors in the plain-text word2vec layout: a "V D" header line followed
/// by V lines of "word c1 ... cD".
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  static EmbeddingTable parse(std::istream& in);
  static EmbeddingTable load(const std::filesystem::path& path);

  // Throws kDimension on a length mismatch and kDuplicateWord on a repeat.
  void add(std::string word, Vector values);

  const Vector* find(const std::string& word) const;
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, Vector> vectors_;
};

struct PooledVector {
  Vector values;
  bool is_zero = true;

  bool operator==(const PooledVector&) const = default;
};

/// Mean of the in-vocabulary keyword vectors, counting repeats. Out-of-vocabulary
/// keywords are skipped; with none left the result is the zero vector.
PooledVector embed_keywords(const std::vector<std::string>& keywords,
                            const EmbeddingTable& table);

/// 0.0 when either side has zero norm. Throws kDimension on length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace retriever::embed
