#include "retriever/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "retriever/error.hpp"

namespace retriever::embed {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) parts.push_back(line.substr(start, i - start));
  }
  return parts;
}

double parse_component(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::kFormat, "embeddings line " + std::to_string(line_no) +
                                        ": bad component '" + std::string(text) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view text, const char* what) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kFormat,
                std::string("embeddings header: bad ") + what + " '" +
                    std::string(text) + "'");
  }
  return value;
}

}  // namespace

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kFormat, "embeddings: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_spaces(line);
  if (header.size() != 2) {
    throw Error(ErrorCode::kFormat, "embeddings header must be 'V D'");
  }
  const std::size_t rows = parse_count(header[0], "row count");
  const std::size_t dim = parse_count(header[1], "dimension");
  if (dim == 0) throw Error(ErrorCode::kFormat, "embeddings dimension must be positive");

  EmbeddingTable table(dim);
  std::size_t line_no = 1;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = split_spaces(line);
    if (parts.size() != dim + 1) {
      throw Error(ErrorCode::kFormat,
                  "embeddings line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " components, got " +
                      std::to_string(parts.empty() ? 0 : parts.size() - 1));
    }
    Vector values;
    values.reserve(dim);
    for (std::size_t k = 1; k < parts.size(); ++k) {
      values.push_back(parse_component(parts[k], line_no));
    }
    std::string word(parts[0]);
    if (table.find(word) != nullptr) {
      throw Error(ErrorCode::kDuplicateWord, "embeddings line " +
                                                 std::to_string(line_no) +
                                                 ": duplicate word '" + word + "'");
    }
    table.add(std::move(word), std::move(values));
    ++seen;
  }
  if (seen != rows) {
    throw Error(ErrorCode::kFormat, "embeddings header declares " +
                                        std::to_string(rows) + " rows, found " +
                                        std::to_string(seen));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open embeddings: " + path.string());
  return parse(in);
}

void EmbeddingTable::add(std::string word, Vector values) {
  if (values.size() != dim_) {
    throw Error(ErrorCode::kDimension, "vector for '" + word + "' has length " +
                                           std::to_string(values.size()) +
                                           ", table dimension is " +
                                           std::to_string(dim_));
  }
  auto [it, inserted] = vectors_.emplace(std::move(word), std::move(values));
  if (!inserted) {
    throw Error(ErrorCode::kDuplicateWord, "duplicate word '" + it->first + "'");
  }
}

const Vector* EmbeddingTable::find(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

PooledVector embed_keywords(const std::vector<std::string>& keywords,
                            const EmbeddingTable& table) {
  // Summing in a canonical (sorted) order makes the result bit-identical under
  // any permutation of the keywords.
  std::map<std::string, std::size_t> counts;
  for (const auto& k : keywords) {
    if (table.find(k) != nullptr) ++counts[k];
  }
  PooledVector pooled;
  pooled.values.assign(table.dim(), 0.0);
  std::size_t total = 0;
  for (const auto& [word, n] : counts) {
    const auto& v = *table.find(word);
    for (std::size_t i = 0; i < v.size(); ++i) {
      pooled.values[i] += static_cast<double>(n) * v[i];
    }
    total += n;
  }
  if (total == 0) return pooled;
  for (auto& x : pooled.values) x /= static_cast<double>(total);
  pooled.is_zero = false;
  return pooled;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimension, "cosine: length " + std::to_string(u.size()) +
                                           " vs " + std::to_string(v.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace retriever::embed
