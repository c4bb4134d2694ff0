#include "zew/text.hpp"

#include "zew/utf8.hpp"

namespace zew::text {

bool is_space(char32_t cp) noexcept {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_ascii_punct(char32_t cp) noexcept {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

bool is_ascii_alnum(char32_t cp) noexcept {
  return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

char32_t to_lower(char32_t cp) noexcept {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE && cp != 0xD7) return cp + 0x20;               // Latin-1
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x100 && cp <= 0x17F && cp != 0x130 && cp != 0x138 && cp != 0x149 &&
      cp != 0x17F) {                                             // Latin Extended-A
    const bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
    if (odd_upper) return (cp % 2 == 1) ? cp + 1 : cp;
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;  // Greek
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;                  // Cyrillic
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

std::u32string to_lower(std::u32string_view s) {
  std::u32string out(s);
  for (auto& cp : out) cp = to_lower(cp);
  return out;
}

std::string to_lower(std::string_view utf8_text) {
  return utf8::encode(to_lower(utf8::decode(utf8_text)));
}

std::vector<TokenSpan> token_spans(std::u32string_view s) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    TokenSpan t{i, i, i, i};
    while (i < s.size() && !is_space(s[i])) ++i;
    t.end = i;
    t.core_begin = t.begin;
    t.core_end = t.end;
    while (t.core_begin < t.core_end && is_ascii_punct(s[t.core_begin])) ++t.core_begin;
    while (t.core_end > t.core_begin && is_ascii_punct(s[t.core_end - 1])) --t.core_end;
    spans.push_back(t);
  }
  return spans;
}

std::vector<std::u32string> word_cores(std::u32string_view s) {
  std::vector<std::u32string> out;
  for (const auto& t : token_spans(s)) {
    if (t.has_core()) out.push_back(to_lower(s.substr(t.core_begin, t.core_end - t.core_begin)));
  }
  return out;
}

}  // namespace zew::text
