#include "retriever/thai_text.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "retriever/error.hpp"
#include "retriever/utf8.hpp"

namespace retriever::text {

namespace {

constexpr char32_t kMaiYamok = 0x0E46;  // ๆ

bool is_squeezable(char32_t cp) {
  return is_thai_combining(cp) || cp == U'?' || cp == kMaiYamok;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void strip_bom(std::string& line) {
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

// Calls `visit` on every string one Norvig edit away from `word`.
template <typename Visit>
void for_each_edit(const std::u32string& word, const std::u32string& alphabet,
                   Visit&& visit) {
  const std::size_t n = word.size();
  std::u32string buf;
  for (std::size_t i = 0; i < n; ++i) {  // deletes
    buf.assign(word, 0, i);
    buf.append(word, i + 1);
    visit(buf);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {  // transposes
    buf = word;
    std::swap(buf[i], buf[i + 1]);
    visit(buf);
  }
  for (std::size_t i = 0; i < n; ++i) {  // replaces
    buf = word;
    for (char32_t c : alphabet) {
      buf[i] = c;
      visit(buf);
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {  // inserts
    for (char32_t c : alphabet) {
      buf.assign(word, 0, i);
      buf.push_back(c);
      buf.append(word, i);
      visit(buf);
    }
  }
}

}  // namespace

std::string_view to_string(PosTag tag) noexcept {
  switch (tag) {
    case PosTag::CMTR: return "CMTR";
    case PosTag::NPRP: return "NPRP";
    case PosTag::NCMN: return "NCMN";
    case PosTag::NTTL: return "NTTL";
    case PosTag::VACT: return "VACT";
    case PosTag::VSTA: return "VSTA";
    case PosTag::PRON: return "PRON";
    case PosTag::PREP: return "PREP";
    case PosTag::PART: return "PART";
    case PosTag::PUNC: return "PUNC";
    case PosTag::OTHER: return "OTHER";
  }
  return "OTHER";
}

PosTag parse_pos_tag(std::string_view name) noexcept {
  static constexpr PosTag kAll[] = {
      PosTag::CMTR, PosTag::NPRP, PosTag::NCMN, PosTag::NTTL,
      PosTag::VACT, PosTag::VSTA, PosTag::PRON, PosTag::PREP,
      PosTag::PART, PosTag::PUNC, PosTag::OTHER};
  for (PosTag t : kAll) {
    if (to_string(t) == name) return t;
  }
  return PosTag::OTHER;
}

bool is_keyword_tag(PosTag tag) noexcept {
  switch (tag) {
    case PosTag::CMTR:
    case PosTag::NPRP:
    case PosTag::NCMN:
    case PosTag::NTTL:
    case PosTag::VACT:
    case PosTag::VSTA:
      return true;
    default:
      return false;
  }
}

bool is_thai_combining(char32_t cp) noexcept {
  return cp == 0x0E31 || (cp >= 0x0E34 && cp <= 0x0E3A) ||
         (cp >= 0x0E47 && cp <= 0x0E4E);
}

// ---------------------------------------------------------------------------
// Lexicon

Lexicon::Lexicon(std::vector<std::pair<std::string, LexiconEntry>> entries,
                 std::u32string alphabet)
    : alphabet_(std::move(alphabet)) {
  std::set<char32_t> seen;
  for (auto& [word, entry] : entries) {
    auto cps = utf8::decode(word);
    if (cps.empty()) throw Error(ErrorCode::kFormat, "lexicon word is empty");
    for (char32_t c : cps) seen.insert(c);
    max_len_ = std::max(max_len_, cps.size());
    if (!by_cp_.emplace(std::move(cps), entry).second) {
      throw Error(ErrorCode::kDuplicateWord, "duplicate lexicon word: " + word);
    }
  }
  if (alphabet_.empty()) alphabet_.assign(seen.begin(), seen.end());
  if (alphabet_.empty()) {
    throw Error(ErrorCode::kFormat, "lexicon alphabet is empty");
  }

  const std::hash<std::u32string> hasher;
  std::u32string buf;
  for (const auto& [word, _] : by_cp_) {
    near_hashes_.insert(hasher(word));
    for (std::size_t i = 0; i < word.size(); ++i) {
      buf.assign(word, 0, i);
      buf.append(word, i + 1);
      near_hashes_.insert(hasher(buf));
    }
  }
}

Lexicon Lexicon::parse(std::istream& in) {
  std::vector<std::pair<std::string, LexiconEntry>> entries;
  std::u32string alphabet;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line_no == 1) strip_bom(line);
    if (line.rfind("#alphabet:", 0) == 0) {
      for (char32_t c : utf8::decode(std::string_view(line).substr(10))) {
        if (!utf8::is_space(c)) alphabet.push_back(c);
      }
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw Error(ErrorCode::kFormat,
                  "lexicon line " + std::to_string(line_no) +
                      ": expected word<TAB>frequency<TAB>tag");
    }
    LexiconEntry entry;
    const auto freq = trim(fields[1]);
    if (freq.empty() ||
        !std::all_of(freq.begin(), freq.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::kFormat, "lexicon line " + std::to_string(line_no) +
                                          ": frequency is not a non-negative integer");
    }
    entry.frequency = std::stoull(freq);
    entry.tag = parse_pos_tag(trim(fields[2]));
    if (fields[0].empty()) {
      throw Error(ErrorCode::kFormat,
                  "lexicon line " + std::to_string(line_no) + ": empty word");
    }
    entries.emplace_back(std::move(fields[0]), entry);
  }
  return Lexicon(std::move(entries), std::move(alphabet));
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open lexicon: " + path.string());
  return parse(in);
}

bool Lexicon::contains(std::string_view word) const {
  return find(word) != nullptr;
}

bool Lexicon::contains(std::u32string_view word) const {
  return find(word) != nullptr;
}

const LexiconEntry* Lexicon::find(std::string_view word) const {
  return find(std::u32string_view(utf8::decode(word)));
}

const LexiconEntry* Lexicon::find(std::u32string_view word) const {
  auto it = by_cp_.find(std::u32string(word));
  return it == by_cp_.end() ? nullptr : &it->second;
}

bool Lexicon::may_be_near_word(const std::u32string& s) const {
  const std::hash<std::u32string> hasher;
  if (near_hashes_.count(hasher(s))) return true;
  std::u32string buf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    buf.assign(s, 0, i);
    buf.append(s, i + 1);
    if (near_hashes_.count(hasher(buf))) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// StopwordSet

StopwordSet StopwordSet::parse(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (first) strip_bom(line);
    first = false;
    auto word = trim(line);
    if (word.empty() || word[0] == '#') continue;
    words.insert(std::move(word));
  }
  return StopwordSet(std::move(words));
}

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open stopwords: " + path.string());
  return parse(in);
}

// ---------------------------------------------------------------------------
// Pipeline stages

std::string normalize(std::string_view text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    const bool at_boundary = out.empty() || pending_space;
    if (is_thai_combining(cp) && at_boundary) continue;  // dangling mark
    if (!at_boundary && is_squeezable(cp) && out.back() == cp) continue;
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(cp);
  }
  return utf8::encode(out);
}

std::vector<std::string> tokenize(std::string_view text, const Lexicon& lexicon) {
  const auto cps = utf8::decode(text);
  std::vector<std::string> tokens;
  std::u32string unknown;
  auto flush = [&] {
    if (!unknown.empty()) {
      tokens.push_back(utf8::encode(unknown));
      unknown.clear();
    }
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    if (utf8::is_space(cps[i])) {
      flush();
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < cps.size() && !utf8::is_space(cps[run_end])) ++run_end;

    std::size_t match = 0;
    const std::size_t longest = std::min(lexicon.max_word_length(), run_end - i);
    for (std::size_t len = longest; len > 0; --len) {
      if (lexicon.contains(std::u32string_view(cps.data() + i, len))) {
        match = len;
        break;
      }
    }
    if (match == 0) {
      unknown.push_back(cps[i]);
      ++i;
      continue;
    }
    flush();
    tokens.push_back(utf8::encode(std::u32string_view(cps.data() + i, match)));
    i += match;
  }
  flush();
  return tokens;
}

std::string correct_spelling(std::string_view token, const Lexicon& lexicon) {
  const auto word = utf8::decode(token);
  if (lexicon.contains(std::u32string_view(word))) return std::string(token);

  const LexiconEntry* best_entry = nullptr;
  std::u32string best;
  auto consider = [&](const std::u32string& candidate) {
    const auto* entry = lexicon.find(std::u32string_view(candidate));
    if (entry == nullptr) return;
    if (best_entry == nullptr || entry->frequency > best_entry->frequency ||
        (entry->frequency == best_entry->frequency && candidate < best)) {
      best_entry = entry;
      best = candidate;
    }
  };

  const auto& alphabet = lexicon.alphabet();
  for_each_edit(word, alphabet, consider);
  if (best_entry != nullptr) return utf8::encode(best);

  for_each_edit(word, alphabet, [&](const std::u32string& once) {
    if (!lexicon.may_be_near_word(once)) return;
    for_each_edit(once, alphabet, consider);
  });
  if (best_entry != nullptr) return utf8::encode(best);
  return std::string(token);
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordSet& stops) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t == "?" || stops.contains(t)) continue;
    out.push_back(t);
  }
  return out;
}

std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens,
                                 const Lexicon& lexicon) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto* entry = lexicon.find(t);
    out.push_back({t, entry ? entry->tag : PosTag::NCMN});
  }
  return out;
}

std::vector<std::string> extract_keywords(const std::vector<TaggedToken>& tagged) {
  std::vector<std::string> out;
  for (const auto& t : tagged) {
    if (is_keyword_tag(t.tag)) out.push_back(t.surface);
  }
  return out;
}

std::vector<std::string> TextPipeline::heading_keywords(
    std::string_view heading) const {
  return extract_keywords(pos_tag(tokenize(normalize(heading), lexicon), lexicon));
}

std::vector<std::string> TextPipeline::content_tokens(std::string_view body,
                                                      SpellingCache* cache) const {
  auto tokens = tokenize(normalize(body), lexicon);
  for (auto& t : tokens) {
    if (cache != nullptr) {
      auto it = cache->find(t);
      if (it == cache->end()) {
        it = cache->emplace(t, correct_spelling(t, lexicon)).first;
      }
      t = it->second;
    } else {
      t = correct_spelling(t, lexicon);
    }
  }
  return remove_stopwords(tokens, stopwords);
}

std::vector<std::string> TextPipeline::query_tokens(std::string_view query) const {
  return tokenize(normalize(query), lexicon);
}

std::vector<std::string> TextPipeline::query_keywords(
    const std::vector<std::string>& tokens) const {
  return extract_keywords(pos_tag(remove_stopwords(tokens, stopwords), lexicon));
}

}  // namespace retriever::text
