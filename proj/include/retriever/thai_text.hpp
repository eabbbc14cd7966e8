#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace retriever::text {

/// Coarse ORCHID-style part-of-speech tags. Only the first six are treated as
/// keyword-bearing; the rest exist so lexicon entries can mark filler words.
enum class PosTag : std::uint8_t {
  CMTR,  // measurement classifier
  NPRP,  // proper noun
  NCMN,  // common noun
  NTTL,  // title noun
  VACT,  // active verb
  VSTA,  // stative verb
  PRON,
  PREP,
  PART,
  PUNC,
  OTHER,
};

std::string_view to_string(PosTag tag) noexcept;
// Unrecognised names map to OTHER so full ORCHID tag files load cleanly.
PosTag parse_pos_tag(std::string_view name) noexcept;
bool is_keyword_tag(PosTag tag) noexcept;

struct LexiconEntry {
  std::uint64_t frequency = 0;
  PosTag tag = PosTag::NCMN;
};

/// Word list driving segmentation, spelling correction and tagging.
///
/// Words are stored as code-point strings: the segmenter and the edit
/// generator work on code points so that Thai combining marks count as single
/// characters.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::vector<std::pair<std::string, LexiconEntry>> entries,
          std::u32string alphabet);

  /// TSV: optional "#alphabet:<chars>" first line, then word\tfrequency\ttag.
  /// Without an alphabet header the alphabet is every code point used by the
  /// entries, in ascending order.
  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  bool contains(std::u32string_view word) const;
  const LexiconEntry* find(std::string_view word) const;
  const LexiconEntry* find(std::u32string_view word) const;

  const std::u32string& alphabet() const noexcept { return alphabet_; }
  std::size_t max_word_length() const noexcept { return max_len_; }
  std::size_t size() const noexcept { return by_cp_.size(); }

 private:
  friend std::string correct_spelling(std::string_view, const Lexicon&);

  // Hashes of every word and every single-deletion of every word. A string can
  // only be one edit away from a lexicon word if it or one of its deletions
  // hashes into this set.
  bool may_be_near_word(const std::u32string& s) const;

  std::unordered_map<std::u32string, LexiconEntry> by_cp_;
  std::unordered_set<std::size_t> near_hashes_;
  std::u32string alphabet_;
  std::size_t max_len_ = 0;
};

class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}

  /// One word per line; blank lines and lines starting with '#' are skipped.
  static StopwordSet parse(std::istream& in);
  static StopwordSet load(const std::filesystem::path& path);

  bool contains(std::string_view word) const {
    return words_.count(std::string(word)) != 0;
  }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct TaggedToken {
  std::string surface;
  PosTag tag;

  bool operator==(const TaggedToken&) const = default;
};

/// Collapses whitespace, drops dangling Thai combining marks and squeezes
/// repeated marks, "?" and "ๆ". Idempotent and never lengthens the input.
std::string normalize(std::string_view text);

/// Combining vowels and tone marks that cannot begin a syllable.
bool is_thai_combining(char32_t cp) noexcept;

/// Greedy longest-match segmentation. Whitespace separates tokens and never
/// appears in one; runs of characters where no lexicon word starts become a
/// single unknown token.
std::vector<std::string> tokenize(std::string_view text, const Lexicon& lexicon);

/// Norvig-style correction: the token itself if known, else the most frequent
/// known word at edit distance 1, then 2. Frequency ties go to the smaller
/// code-point sequence.
std::string correct_spelling(std::string_view token, const Lexicon& lexicon);

/// Order-preserving; "?" is always dropped.
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordSet& stops);

/// Unknown words are tagged NCMN.
std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens,
                                 const Lexicon& lexicon);

/// Keeps surfaces with a keyword tag, in order, duplicates included.
std::vector<std::string> extract_keywords(const std::vector<TaggedToken>& tagged);

// Memo for correct_spelling across a batch; keyed by the raw token.
using SpellingCache = std::unordered_map<std::string, std::string>;

/// The data files shared by document and query processing.
struct TextPipeline {
  Lexicon lexicon;
  StopwordSet stopwords;

  // normalize -> tokenize -> pos_tag -> extract_keywords
  std::vector<std::string> heading_keywords(std::string_view heading) const;
  // normalize -> tokenize -> correct_spelling -> remove_stopwords
  std::vector<std::string> content_tokens(std::string_view body,
                                          SpellingCache* cache = nullptr) const;
  // normalize -> tokenize
  std::vector<std::string> query_tokens(std::string_view query) const;
  // remove_stopwords -> pos_tag -> extract_keywords
  std::vector<std::string> query_keywords(
      const std::vector<std::string>& tokens) const;
};

}  // namespace retriever::text
