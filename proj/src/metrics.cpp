#include "zew/metrics.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "zew/error.hpp"
#include "zew/text.hpp"
#include "zew/utf8.hpp"

namespace zew {

Label parse_label(std::string_view s) {
  if (s == "0") return Label::Negative;
  if (s == "1") return Label::Positive;
  throw DomainError("unknown label '" + std::string(s) + "'");
}

std::vector<std::string> split_whitespace(std::string_view text) {
  const auto cps = utf8::decode(text);
  std::vector<std::string> out;
  for (const auto& t : text::token_spans(cps)) out.push_back(utf8::encode(cps.substr(t.begin, t.end - t.begin)));
  return out;
}

namespace {

using Gram = std::vector<std::string>;

std::map<Gram, std::size_t> count_ngrams(std::span<const std::string> toks, std::size_t n) {
  std::map<Gram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) ++counts[Gram(toks.begin() + i, toks.begin() + i + n)];
  return counts;
}

}  // namespace

double bleu4(std::span<const std::string> reference, std::span<const std::string> candidate) {
  if (reference.empty() && candidate.empty()) return 1.0;
  if (reference.empty() || candidate.empty()) return 0.0;

  const std::size_t max_n = std::min<std::size_t>(4, candidate.size());
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto cand = count_ngrams(candidate, n);
    const auto ref = count_ngrams(reference, n);
    std::size_t clipped = 0;
    for (const auto& [gram, c] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) clipped += std::min(c, it->second);
    }
    if (clipped == 0) return 0.0;
    const std::size_t total = candidate.size() - n + 1;
    log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

double bleu4(std::string_view reference, std::string_view candidate) {
  const auto ref = split_whitespace(reference);
  const auto cand = split_whitespace(candidate);
  return bleu4(ref, cand);
}

double asp(std::span<const Label> predictions) {
  if (predictions.empty()) throw DomainError("attack success percentage of an empty prediction set");
  const auto pos = std::count(predictions.begin(), predictions.end(), Label::Positive);
  return 100.0 * static_cast<double>(pos) / static_cast<double>(predictions.size());
}

double median_of_sorted(std::span<const double> sorted) {
  if (sorted.empty()) throw DomainError("median of an empty sequence");
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

ScoreDistribution summarize(std::span<const double> values, std::string label) {
  if (values.empty()) throw DomainError("cannot summarize an empty distribution");
  ScoreDistribution d;
  d.label = std::move(label);
  d.values.assign(values.begin(), values.end());
  std::vector<double> sorted = d.values;
  std::sort(sorted.begin(), sorted.end());
  const std::span<const double> s(sorted);
  const std::size_t n = s.size();
  d.median = median_of_sorted(s);
  if (n == 1) {
    d.q1 = d.q3 = s[0];
  } else {
    const std::size_t half = n / 2;
    d.q1 = median_of_sorted(s.first(half));
    d.q3 = median_of_sorted(s.last(half));
  }
  d.min = s.front();
  d.max = s.back();
  return d;
}

std::string summary_csv_header() { return "label,median,q1,q3,min,max,n"; }

std::string summary_csv_row(const ScoreDistribution& d) {
  return d.label + "," + format_double(d.median) + "," + format_double(d.q1) + "," + format_double(d.q3) +
         "," + format_double(d.min) + "," + format_double(d.max) + "," + std::to_string(d.n());
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace zew
