#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "retriever/thai_text.hpp"

namespace retriever {

/// Country code -> surface forms used to mention that country in a query.
class Gazetteer {
 public:
  Gazetteer() = default;
  /// Throws kDuplicateEntry when a surface form is claimed by two countries.
  explicit Gazetteer(std::map<std::string, std::vector<std::string>> forms);

  /// JSON object { "MM": ["เมียนมาร์", "พม่า"], ... }.
  static Gazetteer parse(const std::string& json_text);
  static Gazetteer load(const std::filesystem::path& path);

  bool has_country(const std::string& code) const { return forms_.count(code) != 0; }
  const std::map<std::string, std::vector<std::string>>& forms() const noexcept {
    return forms_;
  }

  /// Pre-segments every surface form so detection is a token-sequence match.
  void compile(const text::Lexicon& lexicon);

  /// Countries with a surface form occurring as a contiguous token run in
  /// `tokens`. Sorted, unique. compile() must have been called.
  std::vector<std::string> detect(const std::vector<std::string>& tokens) const;

 private:
  std::map<std::string, std::vector<std::string>> forms_;
  std::vector<std::pair<std::string, std::vector<std::string>>> compiled_;
};

}  // namespace retriever
