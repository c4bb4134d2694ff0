#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace zew {

// Word polarity table. Keys are lowercase and never contain invisible
// codepoints; valences lie in [-1, 1].
class SentimentLexicon {
 public:
  static constexpr double kDefaultNegativeThreshold = -0.05;

  SentimentLexicon() = default;
  explicit SentimentLexicon(double negative_threshold);

  // Lowercases the key; a repeated key keeps the last value.
  // Throws RangeError for a valence outside [-1, 1], DomainError for a key
  // that is empty or contains invisible codepoints.
  void set(std::string_view word, double valence);

  // Exact key lookup (no stemming); 0 when absent.
  double valence(std::string_view word) const;
  bool contains(std::string_view word) const;

  double negative_threshold() const noexcept { return negative_threshold_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, double, std::less<>>& entries() const noexcept { return entries_; }

  void write(std::ostream& out) const;

 private:
  std::map<std::string, double, std::less<>> entries_;
  double negative_threshold_ = kDefaultNegativeThreshold;
};

// Reads `word<TAB>valence` lines; `#` lines and blank lines are skipped.
SentimentLexicon load_lexicon(std::istream& in,
                              double negative_threshold = SentimentLexicon::kDefaultNegativeThreshold);
SentimentLexicon load_lexicon_file(const std::string& path,
                                   double negative_threshold = SentimentLexicon::kDefaultNegativeThreshold);

// Built-in ~200 word lexicon. Every key is a fixed point of stem().
const SentimentLexicon& starter_lexicon();

// Strips the first of "ing", "ed", "es", "ly", "s" that matches and leaves at
// least three codepoints. At most one rule fires.
std::u32string stem(std::u32string_view word);
std::string stem(std::string_view word);

// valence(stem(lowercase(word))) <= threshold.
bool word_is_negative(std::u32string_view word, const SentimentLexicon& lex);
bool word_is_negative(std::string_view word, const SentimentLexicon& lex);

// Mean over word tokens of max(0, -valence(stem(token))); 0 for a sentence
// without word tokens. Always in [0, 1].
double sentence_negativity(std::string_view text, const SentimentLexicon& lex);

}  // namespace zew
