#include "zew/defense.hpp"

#include <cmath>

#include "json.hpp"
#include "zew/codepoints.hpp"
#include "zew/error.hpp"
#include "zew/utf8.hpp"

namespace zew {

DetectionReport detect(std::u32string_view text) {
  DetectionReport report;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_invisible(text[i])) report.hits.push_back({i, text[i]});
  }
  report.flagged = !report.hits.empty();
  return report;
}

DetectionReport detect(std::string_view text) { return detect(utf8::decode(text)); }

GuardPolicy parse_guard_policy(std::string_view name) {
  if (name == "reject") return GuardPolicy::Reject;
  if (name == "strip") return GuardPolicy::Strip;
  throw DomainError("unknown guard policy '" + std::string(name) + "'");
}

GuardResult guard(std::string_view text, GuardPolicy policy) {
  const auto cps = utf8::decode(text);
  if (policy == GuardPolicy::Strip) return utf8::encode(strip_invisible(cps));
  auto report = detect(cps);
  if (report.flagged) return Rejection{std::move(report)};
  return std::string(text);
}

bool discrepancy_probe(const TextScore& score, std::string_view text, double tolerance) {
  if (tolerance < 0.0) throw RangeError("tolerance must be >= 0");
  const std::string clean = strip_invisible(text);
  return std::fabs(score(text) - score(clean)) > tolerance;
}

std::string to_json_line(const DetectionReport& report) {
  nlohmann::ordered_json j;
  j["flagged"] = report.flagged;
  auto& hits = j["hits"] = nlohmann::ordered_json::array();
  for (const auto& h : report.hits) {
    hits.push_back({{"index", h.index}, {"codepoint", format_codepoint(h.codepoint)}});
  }
  return j.dump();
}

}  // namespace zew
