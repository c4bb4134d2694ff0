#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small codepoint classification helpers shared by the lexicon, attack and
// pipeline modules. No Unicode database: the tables cover what the toolkit
// needs (White_Space, ASCII punctuation, simple case folding for Latin,
// Greek and Cyrillic).
namespace zew::text {

bool is_space(char32_t cp) noexcept;
bool is_ascii_punct(char32_t cp) noexcept;
bool is_ascii_alnum(char32_t cp) noexcept;
char32_t to_lower(char32_t cp) noexcept;

std::u32string to_lower(std::u32string_view s);
std::string to_lower(std::string_view utf8_text);

// A whitespace-delimited token [begin, end) and its core [core_begin, core_end)
// with leading/trailing ASCII punctuation excluded. core may be empty.
struct TokenSpan {
  std::size_t begin;
  std::size_t end;
  std::size_t core_begin;
  std::size_t core_end;

  bool has_core() const noexcept { return core_end > core_begin; }
};

std::vector<TokenSpan> token_spans(std::u32string_view s);

// Lowercased token cores of a sentence, skipping tokens that are all punctuation.
std::vector<std::u32string> word_cores(std::u32string_view s);

}  // namespace zew::text
