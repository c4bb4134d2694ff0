#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace zew {

// ---------------------------------------------------------------------------
// Preprocessing and tokenization

struct PreprocessConfig {
  bool lowercase = false;
  bool strip_social = false;  // hashtags, mentions, URLs; then whitespace collapse
  bool remove_stopwords = false;
  bool apply_stem = false;

  bool operator==(const PreprocessConfig&) const = default;
};

// strip_social, then lowercase. Stopword removal and stemming are word-level
// transforms applied by analyze().
std::string preprocess(std::string_view text, const PreprocessConfig& cfg);

enum class TokenLevel { Word, Char };

std::string_view to_string(TokenLevel level) noexcept;
TokenLevel parse_token_level(std::string_view name);

struct TokenizerSpec {
  TokenLevel level = TokenLevel::Word;
  int ngram_lo = 1;
  int ngram_hi = 1;

  // Throws RangeError unless 1 <= ngram_lo <= ngram_hi.
  void validate() const;
  bool operator==(const TokenizerSpec&) const = default;
};

using Tokens = std::vector<std::string>;

// Separator placed between the words of a word n-gram.
inline constexpr std::string_view kNgramSeparator = " ";

// Word level: split on whitespace, each ASCII punctuation codepoint is its
// own unit. Char level: every codepoint (whitespace included) is a unit.
// All n-grams for n = lo..hi, grouped by n, in reading order.
Tokens tokenize(std::string_view text, const TokenizerSpec& spec);

// preprocess -> units -> (word level) stopword removal and stemming -> n-grams.
Tokens analyze(std::string_view text, const PreprocessConfig& cfg, const TokenizerSpec& spec);

bool is_stopword(std::string_view word);

// ---------------------------------------------------------------------------
// Vocabulary and out-of-vocabulary handling

using TokenId = std::uint32_t;

struct OovPolicy {
  enum class Kind { MapToUnk, Discard, Placeholders };

  Kind kind = Kind::MapToUnk;
  std::size_t placeholders = 0;  // k, only for Placeholders

  static OovPolicy map_to_unk() { return {Kind::MapToUnk, 0}; }
  static OovPolicy discard() { return {Kind::Discard, 0}; }
  static OovPolicy placeholder(std::size_t k);

  bool operator==(const OovPolicy&) const = default;
};

std::string to_string(const OovPolicy& policy);
// "unk", "discard", "placeholders:K"
OovPolicy parse_oov_policy(std::string_view name);

// Dense ids: regular tokens occupy [0, regular_size()) in frequency-rank
// order; special tokens (UNK, or UNK1..UNKk) follow.
class Vocabulary {
 public:
  Vocabulary() = default;

  std::optional<TokenId> find(std::string_view token) const;
  std::size_t size() const noexcept { return tokens_.size() + special_count(); }
  std::size_t regular_size() const noexcept { return tokens_.size(); }
  std::size_t max_size() const noexcept { return max_size_; }
  const OovPolicy& policy() const noexcept { return policy_; }

  std::optional<TokenId> unk_id() const noexcept;
  // 1-based placeholder number j in [1, k].
  TokenId placeholder_id(std::size_t j) const;

  // Display form; specials render as "UNK" / "UNK<j>".
  std::string token_of(TokenId id) const;

  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in);

  friend Vocabulary build_vocab(std::span<const Tokens> corpus, std::size_t max_size, OovPolicy policy);

 private:
  std::size_t special_count() const noexcept;

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_of_;
  OovPolicy policy_;
  std::size_t max_size_ = 0;
};

// Keeps the max_size most frequent tokens (total occurrences; ties broken by
// codepoint order). Throws DomainError when the corpus has no tokens,
// RangeError when max_size == 0.
Vocabulary build_vocab(std::span<const Tokens> corpus, std::size_t max_size, OovPolicy policy);

// Throws StateError when the vocabulary lacks the special ids the policy needs.
std::vector<TokenId> index(std::span<const std::string> tokens, const Vocabulary& vocab,
                           const OovPolicy& policy);

// ---------------------------------------------------------------------------
// Encodings

using DenseVector = std::vector<double>;

struct SparseVector {
  std::vector<std::pair<TokenId, double>> entries;  // ascending id, no zeros

  double dot(std::span<const double> dense) const noexcept;
  DenseVector to_dense(std::size_t dim) const;
};

// Smoothed idf: ln((1 + N) / (1 + df)) + 1, fitted on training documents only.
class IdfTable {
 public:
  IdfTable() = default;

  static IdfTable fit(std::span<const std::vector<TokenId>> documents, std::size_t vocab_size);

  bool fitted() const noexcept { return fitted_; }
  std::size_t size() const noexcept { return idf_.size(); }
  std::size_t document_count() const noexcept { return documents_; }
  double idf(TokenId id) const;

  // `token<TAB>idf` lines in id order.
  void write(std::ostream& out, const Vocabulary& vocab) const;
  static IdfTable read(std::istream& in, const Vocabulary& vocab);

 private:
  std::vector<double> idf_;
  std::size_t documents_ = 0;
  bool fitted_ = false;
};

enum class BagKind { Count, TfIdf };

std::string_view to_string(BagKind kind) noexcept;
BagKind parse_bag_kind(std::string_view name);

// Count, or TF-IDF L2-normalized. idf must be fitted for TfIdf.
SparseVector bag_of_tokens(std::span<const TokenId> ids, std::size_t vocab_size, BagKind kind,
                           const IdfTable* idf = nullptr);

DenseVector encode_count(std::span<const TokenId> ids, const Vocabulary& vocab);
DenseVector encode_tfidf(std::span<const TokenId> ids, const Vocabulary& vocab, const IdfTable& idf);
std::vector<DenseVector> encode_onehot(std::span<const TokenId> ids, const Vocabulary& vocab);

// Fixed random embedding table, entries uniform in [-0.1, 0.1].
class DenseTable {
 public:
  DenseTable(std::size_t vocab_size, std::size_t dim, std::uint64_t seed);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> row(TokenId id) const;

 private:
  std::size_t dim_;
  std::vector<double> values_;
};

std::vector<DenseVector> encode_dense(std::span<const TokenId> ids, const DenseTable& table);

enum class EncodeKind { Count, TfIdf, OneHot, Dense };

EncodeKind parse_encode_kind(std::string_view name);

struct EncodeOptions {
  EncodeKind kind = EncodeKind::Count;
  const IdfTable* idf = nullptr;  // TfIdf
  std::size_t dense_dim = 8;      // Dense
  std::uint64_t dense_seed = 0;   // Dense
};

// Count/TfIdf give a single row; OneHot/Dense give one row per id.
std::vector<DenseVector> encode(std::span<const TokenId> ids, const Vocabulary& vocab,
                                const EncodeOptions& options);

}  // namespace zew
