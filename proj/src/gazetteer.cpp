#include "retriever/gazetteer.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "retriever/error.hpp"

namespace retriever {

namespace {

std::string ascii_lower(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

}  // namespace

Gazetteer::Gazetteer(std::map<std::string, std::vector<std::string>> forms)
    : forms_(std::move(forms)) {
  std::map<std::string, std::string> owner;
  for (const auto& [code, surfaces] : forms_) {
    if (code.empty() || code == "none") {
      throw Error(ErrorCode::kFormat, "gazetteer: invalid country code '" + code + "'");
    }
    for (const auto& s : surfaces) {
      auto key = ascii_lower(text::normalize(s));
      if (key.empty()) {
        throw Error(ErrorCode::kFormat, "gazetteer: empty surface form for " + code);
      }
      auto [it, inserted] = owner.emplace(key, code);
      if (!inserted && it->second != code) {
        throw Error(ErrorCode::kDuplicateEntry, "gazetteer: surface form '" + s +
                                                    "' listed for both " +
                                                    it->second + " and " + code);
      }
    }
  }
}

Gazetteer Gazetteer::parse(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("gazetteer: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kFormat, "gazetteer must be a JSON object");
  std::map<std::string, std::vector<std::string>> forms;
  for (const auto& [code, list] : doc.items()) {
    if (!list.is_array()) {
      throw Error(ErrorCode::kFormat, "gazetteer: value for " + code + " must be an array");
    }
    auto& out = forms[code];
    for (const auto& s : list) {
      if (!s.is_string()) {
        throw Error(ErrorCode::kFormat, "gazetteer: non-string surface form for " + code);
      }
      out.push_back(s.get<std::string>());
    }
  }
  return Gazetteer(std::move(forms));
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open gazetteer: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Gazetteer::compile(const text::Lexicon& lexicon) {
  compiled_.clear();
  for (const auto& [code, surfaces] : forms_) {
    for (const auto& s : surfaces) {
      auto tokens = text::tokenize(text::normalize(s), lexicon);
      for (auto& t : tokens) t = ascii_lower(std::move(t));
      if (!tokens.empty()) compiled_.emplace_back(code, std::move(tokens));
    }
  }
}

std::vector<std::string> Gazetteer::detect(const std::vector<std::string>& tokens) const {
  std::vector<std::string> lowered;
  lowered.reserve(tokens.size());
  for (const auto& t : tokens) lowered.push_back(ascii_lower(t));

  std::set<std::string> found;
  for (const auto& [code, form] : compiled_) {
    if (found.count(code)) continue;
    auto it = std::search(lowered.begin(), lowered.end(), form.begin(), form.end());
    if (it != lowered.end()) found.insert(code);
  }
  return {found.begin(), found.end()};
}

}  // namespace retriever
