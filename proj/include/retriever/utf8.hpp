#pragma once

#include <string>
#include <string_view>

namespace retriever::utf8 {

// Invalid sequences decode to U+FFFD, one replacement per offending byte.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_space(char32_t cp) noexcept;

// First `n` code points of `text`.
std::string prefix(std::string_view text, std::size_t n);

}  // namespace retriever::utf8
