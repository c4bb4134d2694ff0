#pragma once

#include <string>
#include <string_view>

namespace zew::utf8 {

// Decodes UTF-8 into scalar values. Throws ParseError on malformed input,
// overlong forms, surrogates and values above U+10FFFF.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_valid(std::string_view text) noexcept;

// Number of codepoints; input must be valid.
std::size_t length(std::string_view text);

}  // namespace zew::utf8
