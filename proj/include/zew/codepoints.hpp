#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace zew {

// Curated set of codepoints that render with zero advance width. All members
// are default-ignorable format controls; none is ASCII.
class ZeroWidthSet {
 public:
  static constexpr std::string_view kVersion = "zw-set-v1";

  static constexpr std::array<char32_t, 28> kMembers = {
      0x061C,                                  // arabic letter mark
      0x180E,                                  // mongolian vowel separator
      0x200B, 0x200C, 0x200D, 0x200E, 0x200F,  // zw space, zwnj, zwj, lrm, rlm
      0x202A, 0x202B, 0x202C, 0x202D, 0x202E,  // bidi embeddings / overrides
      0x2060, 0x2061, 0x2062, 0x2063, 0x2064,  // word joiner, invisible operators
      0x2066, 0x2067, 0x2068, 0x2069,          // bidi isolates
      0x206A, 0x206B, 0x206C, 0x206D, 0x206E, 0x206F,  // deprecated format controls
      0xFEFF,                                  // zero width no-break space
  };

  constexpr std::span<const char32_t> members() const noexcept { return kMembers; }
  constexpr std::size_t size() const noexcept { return kMembers.size(); }
  bool contains(char32_t cp) const noexcept;
  constexpr char32_t operator[](std::size_t i) const noexcept { return kMembers[i]; }

  // One `U+XXXX` line per member, in ascending order.
  void write(std::ostream& out) const;
};

const ZeroWidthSet& zero_width_set() noexcept;

bool is_invisible(char32_t cp) noexcept;

std::u32string strip_invisible(std::u32string_view text);
// UTF-8 convenience overload; throws ParseError on malformed input.
std::string strip_invisible(std::string_view text);

std::size_t count_invisible(std::u32string_view text) noexcept;

std::string format_codepoint(char32_t cp);

}  // namespace zew
