#include "zew/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "zew/error.hpp"
#include "zew/lexicon.hpp"
#include "zew/text.hpp"
#include "zew/utf8.hpp"

namespace zew {

namespace {

constexpr std::string_view kStopwords[] = {
    "a",     "about", "above", "after", "again",  "all",   "am",    "an",    "and",   "any",
    "are",   "as",    "at",    "be",    "been",   "being", "both",  "but",   "by",    "can",
    "did",   "do",    "does",  "doing", "down",   "each",  "few",   "for",   "from",  "had",
    "has",   "have",  "having", "he",   "her",    "here",  "hers",  "him",   "his",   "how",
    "i",     "if",    "in",    "into",  "is",     "it",    "its",   "just",  "me",    "more",
    "most",  "my",    "of",    "off",   "on",     "once",  "only",  "or",    "other", "our",
    "ours",  "out",   "over",  "own",   "same",   "she",   "so",    "some",  "such",  "than",
    "that",  "the",   "their", "them",  "then",   "there", "these", "they",  "this",  "those",
    "to",    "too",   "under", "until", "up",     "very",  "was",   "we",    "were",  "what",
    "when",  "where", "which", "while", "who",    "whom",  "why",   "will",  "with",  "you",
    "your",  "yours",
};

// Word character for the social-media patterns: ASCII alnum, underscore, or
// any non-ASCII codepoint that is not whitespace.
bool is_social_word(char32_t cp) noexcept {
  if (cp < 0x80) return text::is_ascii_alnum(cp) || cp == U'_';
  return !text::is_space(cp);
}

bool starts_with_at(std::u32string_view s, std::size_t i, std::u32string_view prefix) {
  return s.substr(i).starts_with(prefix);
}

std::u32string strip_social(std::u32string_view s) {
  std::u32string kept;
  kept.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t cp = s[i];
    if ((cp == U'#' || cp == U'@') && i + 1 < s.size() && is_social_word(s[i + 1])) {
      ++i;
      while (i < s.size() && is_social_word(s[i])) ++i;
      continue;
    }
    if (starts_with_at(s, i, U"http://") || starts_with_at(s, i, U"https://")) {
      const std::size_t scheme = s[i + 4] == U's' ? 8 : 7;
      if (i + scheme < s.size() && !text::is_space(s[i + scheme])) {
        i += scheme;
        while (i < s.size() && !text::is_space(s[i])) ++i;
        continue;
      }
    }
    kept.push_back(cp);
    ++i;
  }
  std::u32string out;
  for (const auto& t : text::token_spans(kept)) {
    if (!out.empty()) out.push_back(U' ');
    out.append(kept, t.begin, t.end - t.begin);
  }
  return out;
}

std::vector<std::u32string> word_units(std::u32string_view s) {
  std::vector<std::u32string> units;
  std::u32string cur;
  auto flush = [&] {
    if (!cur.empty()) units.push_back(std::move(cur));
    cur.clear();
  };
  for (char32_t cp : s) {
    if (text::is_space(cp)) {
      flush();
    } else if (text::is_ascii_punct(cp)) {
      flush();
      units.emplace_back(1, cp);
    } else {
      cur.push_back(cp);
    }
  }
  flush();
  return units;
}

Tokens ngrams(const std::vector<std::u32string>& units, const TokenizerSpec& spec) {
  Tokens out;
  const std::u32string sep = spec.level == TokenLevel::Word ? std::u32string(U" ") : std::u32string();
  for (int n = spec.ngram_lo; n <= spec.ngram_hi; ++n) {
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= units.size(); ++i) {
      std::u32string gram = units[i];
      for (std::size_t j = 1; j < len; ++j) {
        gram += sep;
        gram += units[i + j];
      }
      out.push_back(utf8::encode(gram));
    }
  }
  return out;
}

std::vector<std::u32string> units_of(std::u32string_view s, TokenLevel level) {
  if (level == TokenLevel::Word) return word_units(s);
  std::vector<std::u32string> units;
  units.reserve(s.size());
  for (char32_t cp : s) units.emplace_back(1, cp);
  return units;
}

// Tab, LF, CR and backslash are escaped in the flat vocabulary files.
std::string escape_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_token(std::string_view token, std::size_t lineno) {
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] != '\\') {
      out += token[i];
      continue;
    }
    if (++i == token.size()) throw ParseError("dangling escape", lineno);
    switch (token[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw ParseError("unknown escape", lineno);
    }
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::size_t lineno, const char* what) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", lineno);
  }
  return v;
}

std::pair<std::string_view, std::string_view> split_tab(std::string_view line, std::size_t lineno) {
  const auto tab = line.rfind('\t');
  if (tab == std::string_view::npos) throw ParseError("missing tab separator", lineno);
  return {line.substr(0, tab), line.substr(tab + 1)};
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string preprocess(std::string_view text, const PreprocessConfig& cfg) {
  std::u32string s = utf8::decode(text);
  if (cfg.strip_social) s = strip_social(s);
  if (cfg.lowercase) s = text::to_lower(s);
  return utf8::encode(s);
}

std::string_view to_string(TokenLevel level) noexcept {
  return level == TokenLevel::Word ? "word" : "char";
}

TokenLevel parse_token_level(std::string_view name) {
  if (name == "word") return TokenLevel::Word;
  if (name == "char") return TokenLevel::Char;
  throw DomainError("unknown token level '" + std::string(name) + "'");
}

void TokenizerSpec::validate() const {
  if (ngram_lo < 1 || ngram_hi < ngram_lo) {
    throw RangeError("invalid n-gram range [" + std::to_string(ngram_lo) + ", " +
                     std::to_string(ngram_hi) + "]");
  }
}

bool is_stopword(std::string_view word) {
  return std::find(std::begin(kStopwords), std::end(kStopwords), word) != std::end(kStopwords);
}

Tokens tokenize(std::string_view text, const TokenizerSpec& spec) {
  spec.validate();
  return ngrams(units_of(utf8::decode(text), spec.level), spec);
}

Tokens analyze(std::string_view text, const PreprocessConfig& cfg, const TokenizerSpec& spec) {
  spec.validate();
  const std::u32string s = utf8::decode(preprocess(text, cfg));
  auto units = units_of(s, spec.level);
  if (spec.level == TokenLevel::Word && (cfg.remove_stopwords || cfg.apply_stem)) {
    std::vector<std::u32string> kept;
    kept.reserve(units.size());
    for (auto& u : units) {
      if (cfg.remove_stopwords && is_stopword(utf8::encode(text::to_lower(u)))) continue;
      kept.push_back(cfg.apply_stem ? stem(u) : std::move(u));
    }
    units = std::move(kept);
  }
  return ngrams(units, spec);
}

// ---------------------------------------------------------------------------

OovPolicy OovPolicy::placeholder(std::size_t k) {
  if (k < 1) throw RangeError("placeholder count must be >= 1");
  return {Kind::Placeholders, k};
}

std::string to_string(const OovPolicy& policy) {
  switch (policy.kind) {
    case OovPolicy::Kind::MapToUnk: return "unk";
    case OovPolicy::Kind::Discard: return "discard";
    case OovPolicy::Kind::Placeholders: return "placeholders:" + std::to_string(policy.placeholders);
  }
  return {};
}

OovPolicy parse_oov_policy(std::string_view name) {
  if (name == "unk") return OovPolicy::map_to_unk();
  if (name == "discard") return OovPolicy::discard();
  constexpr std::string_view prefix = "placeholders:";
  if (name.starts_with(prefix)) {
    return OovPolicy::placeholder(parse_number<std::size_t>(name.substr(prefix.size()), 0, "placeholder count"));
  }
  throw DomainError("unknown OOV policy '" + std::string(name) + "'");
}

std::size_t Vocabulary::special_count() const noexcept {
  switch (policy_.kind) {
    case OovPolicy::Kind::MapToUnk: return 1;
    case OovPolicy::Kind::Discard: return 0;
    case OovPolicy::Kind::Placeholders: return policy_.placeholders;
  }
  return 0;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_of_.find(std::string(token));
  if (it == index_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> Vocabulary::unk_id() const noexcept {
  if (policy_.kind != OovPolicy::Kind::MapToUnk) return std::nullopt;
  return static_cast<TokenId>(tokens_.size());
}

TokenId Vocabulary::placeholder_id(std::size_t j) const {
  if (policy_.kind != OovPolicy::Kind::Placeholders || j < 1 || j > policy_.placeholders) {
    throw StateError("vocabulary has no placeholder UNK" + std::to_string(j));
  }
  return static_cast<TokenId>(tokens_.size() + j - 1);
}

std::string Vocabulary::token_of(TokenId id) const {
  if (id < tokens_.size()) return tokens_[id];
  if (id >= size()) throw RangeError("token id " + std::to_string(id) + " out of range");
  if (policy_.kind == OovPolicy::Kind::MapToUnk) return "UNK";
  return "UNK" + std::to_string(id - tokens_.size() + 1);
}

void Vocabulary::write(std::ostream& out) const {
  out << "#zew-vocab v1\tpolicy=" << to_string(policy_) << "\tmax_size=" << max_size_
      << "\tregular=" << tokens_.size() << '\n';
  for (std::size_t id = 0; id < size(); ++id) {
    out << escape_token(token_of(static_cast<TokenId>(id))) << '\t' << id << '\n';
  }
}

Vocabulary Vocabulary::read(std::istream& in) {
  std::string line;
  if (!read_line(in, line) || !line.starts_with("#zew-vocab v1\t")) {
    throw ParseError("missing vocabulary header", 1);
  }
  Vocabulary v;
  std::size_t regular = 0;
  std::istringstream header(line.substr(14));
  std::string field;
  while (std::getline(header, field, '\t')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError("bad header field '" + field + "'", 1);
    const std::string key = field.substr(0, eq);
    const std::string_view val = std::string_view(field).substr(eq + 1);
    if (key == "policy") v.policy_ = parse_oov_policy(val);
    else if (key == "max_size") v.max_size_ = parse_number<std::size_t>(val, 1, "max_size");
    else if (key == "regular") regular = parse_number<std::size_t>(val, 1, "regular");
  }
  std::size_t lineno = 1;
  std::size_t id = 0;
  while (read_line(in, line)) {
    ++lineno;
    auto [tok, num] = split_tab(line, lineno);
    if (parse_number<std::size_t>(num, lineno, "id") != id) throw ParseError("ids must be dense", lineno);
    if (id < regular) {
      std::string token = unescape_token(tok, lineno);
      v.index_of_.emplace(token, static_cast<TokenId>(id));
      v.tokens_.push_back(std::move(token));
    }
    ++id;
  }
  if (v.tokens_.size() != regular || id != v.size()) throw ParseError("vocabulary size mismatch", lineno);
  return v;
}

Vocabulary build_vocab(std::span<const Tokens> corpus, std::size_t max_size, OovPolicy policy) {
  if (max_size < 1) throw RangeError("max_size must be >= 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc) ++counts[tok];
  }
  if (counts.empty()) throw DomainError("cannot build a vocabulary from an empty corpus");

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);

  Vocabulary v;
  v.policy_ = policy;
  v.max_size_ = max_size;
  v.tokens_.reserve(ranked.size());
  for (auto& [tok, n] : ranked) {
    v.index_of_.emplace(tok, static_cast<TokenId>(v.tokens_.size()));
    v.tokens_.push_back(std::move(tok));
  }
  return v;
}

std::vector<TokenId> index(std::span<const std::string> tokens, const Vocabulary& vocab,
                           const OovPolicy& policy) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  std::optional<TokenId> unk;
  if (policy.kind == OovPolicy::Kind::MapToUnk) {
    unk = vocab.unk_id();
    if (!unk) throw StateError("vocabulary has no UNK id for policy 'unk'");
  }
  if (policy.kind == OovPolicy::Kind::Placeholders) {
    vocab.placeholder_id(policy.placeholders);  // throws when the vocabulary has fewer
  }
  std::unordered_map<std::string_view, std::size_t> slot_of;
  for (const auto& tok : tokens) {
    if (auto id = vocab.find(tok)) {
      ids.push_back(*id);
      continue;
    }
    switch (policy.kind) {
      case OovPolicy::Kind::MapToUnk:
        ids.push_back(*unk);
        break;
      case OovPolicy::Kind::Discard:
        break;
      case OovPolicy::Kind::Placeholders: {
        auto [it, inserted] = slot_of.try_emplace(tok, slot_of.size() % policy.placeholders);
        ids.push_back(vocab.placeholder_id(it->second + 1));
        break;
      }
    }
  }
  return ids;
}

// ---------------------------------------------------------------------------

double SparseVector::dot(std::span<const double> dense) const noexcept {
  double s = 0.0;
  for (const auto& [id, v] : entries) s += v * dense[id];
  return s;
}

DenseVector SparseVector::to_dense(std::size_t dim) const {
  DenseVector out(dim, 0.0);
  for (const auto& [id, v] : entries) out.at(id) = v;
  return out;
}

IdfTable IdfTable::fit(std::span<const std::vector<TokenId>> documents, std::size_t vocab_size) {
  std::vector<std::size_t> df(vocab_size, 0);
  std::vector<std::size_t> last_doc(vocab_size, static_cast<std::size_t>(-1));
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (TokenId id : documents[d]) {
      if (id >= vocab_size) throw RangeError("token id outside vocabulary");
      if (last_doc[id] != d) {
        last_doc[id] = d;
        ++df[id];
      }
    }
  }
  IdfTable t;
  t.documents_ = documents.size();
  t.idf_.resize(vocab_size);
  const double n = static_cast<double>(documents.size());
  for (std::size_t i = 0; i < vocab_size; ++i) {
    t.idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }
  t.fitted_ = true;
  return t;
}

double IdfTable::idf(TokenId id) const {
  if (!fitted_) throw StateError("idf statistics have not been fitted");
  return idf_.at(id);
}

void IdfTable::write(std::ostream& out, const Vocabulary& vocab) const {
  if (!fitted_) throw StateError("idf statistics have not been fitted");
  out.precision(17);
  for (std::size_t id = 0; id < idf_.size(); ++id) {
    out << escape_token(vocab.token_of(static_cast<TokenId>(id))) << '\t' << idf_[id] << '\n';
  }
}

IdfTable IdfTable::read(std::istream& in, const Vocabulary& vocab) {
  IdfTable t;
  std::string line;
  std::size_t lineno = 0;
  while (read_line(in, line)) {
    ++lineno;
    auto [tok, num] = split_tab(line, lineno);
    const auto id = static_cast<TokenId>(t.idf_.size());
    if (id >= vocab.size() || unescape_token(tok, lineno) != vocab.token_of(id)) {
      throw ParseError("idf entry does not match vocabulary", lineno);
    }
    t.idf_.push_back(parse_number<double>(num, lineno, "idf"));
  }
  if (t.idf_.size() != vocab.size()) throw ParseError("idf table size mismatch", lineno);
  t.fitted_ = true;
  return t;
}

std::string_view to_string(BagKind kind) noexcept { return kind == BagKind::Count ? "count" : "tfidf"; }

BagKind parse_bag_kind(std::string_view name) {
  if (name == "count") return BagKind::Count;
  if (name == "tfidf") return BagKind::TfIdf;
  throw DomainError("unknown feature kind '" + std::string(name) + "'");
}

SparseVector bag_of_tokens(std::span<const TokenId> ids, std::size_t vocab_size, BagKind kind,
                           const IdfTable* idf) {
  if (kind == BagKind::TfIdf && (idf == nullptr || !idf->fitted())) {
    throw StateError("TF-IDF encoding requires fitted idf statistics");
  }
  std::vector<TokenId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  SparseVector out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (sorted[i] >= vocab_size) throw RangeError("token id outside vocabulary");
    out.entries.emplace_back(sorted[i], static_cast<double>(j - i));
    i = j;
  }
  if (kind == BagKind::TfIdf) {
    if (idf->size() != vocab_size) throw StateError("idf statistics do not match the vocabulary");
    double norm2 = 0.0;
    for (auto& [id, v] : out.entries) {
      v *= idf->idf(id);
      norm2 += v * v;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& e : out.entries) e.second *= inv;
    }
  }
  return out;
}

DenseVector encode_count(std::span<const TokenId> ids, const Vocabulary& vocab) {
  return bag_of_tokens(ids, vocab.size(), BagKind::Count).to_dense(vocab.size());
}

DenseVector encode_tfidf(std::span<const TokenId> ids, const Vocabulary& vocab, const IdfTable& idf) {
  return bag_of_tokens(ids, vocab.size(), BagKind::TfIdf, &idf).to_dense(vocab.size());
}

std::vector<DenseVector> encode_onehot(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::vector<DenseVector> rows;
  rows.reserve(ids.size());
  for (TokenId id : ids) {
    DenseVector row(vocab.size(), 0.0);
    row.at(id) = 1.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseTable::DenseTable(std::size_t vocab_size, std::size_t dim, std::uint64_t seed) : dim_(dim) {
  if (dim == 0) throw RangeError("dense dimension must be >= 1");
  std::mt19937_64 rng(seed);
  values_.resize(vocab_size * dim);
  for (auto& v : values_) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    v = -0.1 + 0.2 * unit;
  }
}

std::span<const double> DenseTable::row(TokenId id) const {
  if (static_cast<std::size_t>(id) * dim_ >= values_.size()) throw RangeError("token id outside table");
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(id) * dim_, dim_);
}

std::vector<DenseVector> encode_dense(std::span<const TokenId> ids, const DenseTable& table) {
  std::vector<DenseVector> rows;
  rows.reserve(ids.size());
  for (TokenId id : ids) {
    auto r = table.row(id);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

EncodeKind parse_encode_kind(std::string_view name) {
  if (name == "count") return EncodeKind::Count;
  if (name == "tfidf") return EncodeKind::TfIdf;
  if (name == "onehot") return EncodeKind::OneHot;
  if (name == "dense") return EncodeKind::Dense;
  throw DomainError("unknown encoding '" + std::string(name) + "'");
}

std::vector<DenseVector> encode(std::span<const TokenId> ids, const Vocabulary& vocab,
                                const EncodeOptions& options) {
  switch (options.kind) {
    case EncodeKind::Count:
      return {encode_count(ids, vocab)};
    case EncodeKind::TfIdf:
      if (options.idf == nullptr) throw StateError("TF-IDF encoding requires fitted idf statistics");
      return {encode_tfidf(ids, vocab, *options.idf)};
    case EncodeKind::OneHot:
      return encode_onehot(ids, vocab);
    case EncodeKind::Dense:
      return encode_dense(ids, DenseTable(vocab.size(), options.dense_dim, options.dense_seed));
  }
  return {};
}

}  // namespace zew
