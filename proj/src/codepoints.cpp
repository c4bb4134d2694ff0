#include "zew/codepoints.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "zew/utf8.hpp"

namespace zew {

static_assert(std::is_sorted(ZeroWidthSet::kMembers.begin(), ZeroWidthSet::kMembers.end()));
static_assert(std::none_of(ZeroWidthSet::kMembers.begin(), ZeroWidthSet::kMembers.end(),
                           [](char32_t cp) { return cp < 0x80; }));

bool ZeroWidthSet::contains(char32_t cp) const noexcept {
  return std::binary_search(kMembers.begin(), kMembers.end(), cp);
}

void ZeroWidthSet::write(std::ostream& out) const {
  for (char32_t cp : kMembers) out << format_codepoint(cp) << '\n';
}

const ZeroWidthSet& zero_width_set() noexcept {
  static constexpr ZeroWidthSet set;
  return set;
}

bool is_invisible(char32_t cp) noexcept {
  // Fast reject: every member lives in U+061C..U+FEFF.
  if (cp < 0x061C || cp > 0xFEFF) return false;
  return zero_width_set().contains(cp);
}

std::u32string strip_invisible(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::copy_if(text.begin(), text.end(), std::back_inserter(out),
               [](char32_t cp) { return !is_invisible(cp); });
  return out;
}

std::string strip_invisible(std::string_view text) {
  return utf8::encode(strip_invisible(utf8::decode(text)));
}

std::size_t count_invisible(std::u32string_view text) noexcept {
  return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), is_invisible));
}

std::string format_codepoint(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

}  // namespace zew
