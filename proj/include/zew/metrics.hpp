#pragma once

#include <algorithm>
#include <iterator>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zew {

enum class Label : int { Negative = 0, Positive = 1 };

Label parse_label(std::string_view s);
inline int to_int(Label l) noexcept { return static_cast<int>(l); }

// |A ∩ B| / |A ∪ B|; two empty sets are identical, so 1.
template <typename T, typename Cmp>
double jaccard(const std::set<T, Cmp>& a, const std::set<T, Cmp>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  const Cmp& less = a.key_comp();
  while (ia != a.end() && ib != b.end()) {
    if (less(*ia, *ib)) {
      ++ia;
    } else if (less(*ib, *ia)) {
      ++ib;
    } else {
      ++common, ++ia, ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

// Sentence-level cumulative BLEU over whitespace tokens, uniform weights,
// no smoothing. Uses n = 1..min(4, |candidate|). Two empty texts score 1,
// exactly one empty text scores 0.
double bleu4(std::span<const std::string> reference, std::span<const std::string> candidate);
double bleu4(std::string_view reference, std::string_view candidate);

std::vector<std::string> split_whitespace(std::string_view text);

// Percentage of positive labels. Throws DomainError on empty input.
double asp(std::span<const Label> predictions);

struct ScoreDistribution {
  std::string label;
  std::vector<double> values;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;

  std::size_t n() const noexcept { return values.size(); }
};

// Median of the sorted values (mean of the two middles for even n).
// Quartiles are medians of the lower and upper halves; for odd n the middle
// element belongs to neither half. Throws DomainError on empty input.
ScoreDistribution summarize(std::span<const double> values, std::string label = {});

double median_of_sorted(std::span<const double> sorted);

// label,median,q1,q3,min,max,n
std::string summary_csv_header();
std::string summary_csv_row(const ScoreDistribution& d);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace zew
