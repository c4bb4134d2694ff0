#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zew {

struct DetectionHit {
  std::size_t index;  // codepoint index in the input
  char32_t codepoint;

  bool operator==(const DetectionHit&) const = default;
};

// flagged == !hits.empty(); hit indices strictly increase.
struct DetectionReport {
  bool flagged = false;
  std::vector<DetectionHit> hits;

  bool operator==(const DetectionReport&) const = default;
};

DetectionReport detect(std::u32string_view text);
DetectionReport detect(std::string_view text);

enum class GuardPolicy { Reject, Strip };

GuardPolicy parse_guard_policy(std::string_view name);

struct Rejection {
  DetectionReport report;
};

// Either the (possibly sanitized) text or a rejection; never throws for
// flagged input.
using GuardResult = std::variant<std::string, Rejection>;

GuardResult guard(std::string_view text, GuardPolicy policy);

inline bool is_rejected(const GuardResult& r) noexcept { return std::holds_alternative<Rejection>(r); }

using TextScore = std::function<double(std::string_view)>;

// True iff |score(text) - score(strip_invisible(text))| > tolerance.
bool discrepancy_probe(const TextScore& score, std::string_view text, double tolerance);

// `{"flagged":..,"hits":[{"index":..,"codepoint":"U+200B"},..]}`
std::string to_json_line(const DetectionReport& report);

}  // namespace zew
