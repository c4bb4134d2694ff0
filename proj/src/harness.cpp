#include "zew/harness.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "zew/codepoints.hpp"
#include "zew/error.hpp"
#include "zew/utf8.hpp"

namespace zew {

// ---------------------------------------------------------------------------
// Corpus I/O

bool Corpus::labeled() const noexcept {
  return !items.empty() && items.front().label.has_value();
}

std::vector<std::string> Corpus::texts() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.text);
  return out;
}

std::vector<LabeledText> Corpus::labeled_items() const {
  std::vector<LabeledText> out;
  out.reserve(items.size());
  for (const auto& it : items) {
    if (!it.label) throw DomainError("corpus '" + source + "' is not labeled");
    out.push_back({it.text, *it.label});
  }
  return out;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "lines") return CorpusFormat::Lines;
  if (name == "csv") return CorpusFormat::LabeledCsv;
  throw DomainError("unknown corpus format '" + std::string(name) + "'");
}

namespace {

void check_utf8(std::string_view s, std::size_t lineno) {
  if (!utf8::is_valid(s)) throw ParseError("invalid UTF-8", lineno);
}

// Reads one CSV record, possibly spanning several physical lines when a
// quoted field contains a newline. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lineno,
                     std::size_t& record_line) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++lineno;
  record_line = lineno;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        if (!std::getline(in, line)) throw ParseError("unterminated quoted field", record_line);
        ++lineno;
        field += '\n';
        i = 0;
        continue;
      }
      if (!field.empty() && field.back() == '\r' && !was_quoted) field.pop_back();
      fields.push_back(std::move(field));
      return true;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted) throw ParseError("unexpected quote", lineno);
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (was_quoted) {
      if (c == '\r' && i + 1 == line.size()) {
        ++i;
        continue;
      }
      throw ParseError("text after closing quote", lineno);
    } else {
      field += c;
    }
    ++i;
  }
}

}  // namespace

Corpus parse_corpus(std::istream& in, CorpusFormat format, std::string source) {
  Corpus corpus;
  corpus.source = std::move(source);
  std::size_t lineno = 0;
  if (format == CorpusFormat::Lines) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      check_utf8(line, lineno);
      if (line.empty()) continue;
      corpus.items.push_back({std::move(line), std::nullopt});
    }
    return corpus;
  }
  std::vector<std::string> fields;
  std::size_t record_line = 0;
  while (read_csv_record(in, fields, lineno, record_line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2) {
      throw ParseError("expected 2 fields (label,text), found " + std::to_string(fields.size()), record_line);
    }
    if (record_line == 1 && fields[0] == "label" && fields[1] == "text") continue;
    check_utf8(fields[1], record_line);
    Label label;
    try {
      label = parse_label(fields[0]);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), record_line);
    }
    corpus.items.push_back({std::move(fields[1]), label});
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus " + path.string());
  try {
    return parse_corpus(in, format, path.string());
  } catch (const ParseError& e) {
    throw ParseError::with_context(path.string(), e);
  }
}

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_labeled_csv(std::ostream& out, const Corpus& corpus) {
  out << "label,text\n";
  for (const auto& it : corpus.items) {
    if (!it.label) throw DomainError("cannot write an unlabeled item as labeled CSV");
    out << to_int(*it.label) << ',' << csv_quote(it.text) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Splitting and the synthetic corpus

namespace {

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

template <typename T, std::size_t N>
const T& pick(const T (&arr)[N], std::mt19937_64& rng) {
  return arr[rng() % N];
}

constexpr std::string_view kSubjects[] = {"I", "we", "my friends", "they", "honestly I", "people"};
constexpr std::string_view kNouns[] = {
    "album", "movie", "song", "show", "phone", "game", "book", "team", "coffee", "city",
    "update", "restaurant", "concert", "service", "class", "trip", "pizza", "meeting",
    "episode", "weekend", "hotel", "teacher", "car", "laptop", "app"};
constexpr std::string_view kTimes[] = {"today", "tonight", "this week", "again", "lately",
                                       "so far", "right now", "yesterday"};
constexpr std::string_view kPosVerbs[] = {"love", "enjoy", "adore", "admire", "like", "praise", "support"};
constexpr std::string_view kNegVerbs[] = {"hate", "blame", "mock", "regret", "fear"};
constexpr std::string_view kPosAdjs[] = {
    "great", "good", "awesome", "excellent", "wonderful", "beautiful", "nice", "perfect",
    "brilliant", "fantastic", "superb", "sweet", "cute", "pretty", "elegant", "smart",
    "clever", "pleasant", "decent", "cool", "tasty", "ideal", "splendid", "terrific", "incredible"};
constexpr std::string_view kNegAdjs[] = {
    "awful", "terrible", "horrible", "bad", "ugly", "stupid", "nasty", "evil", "cruel",
    "rude", "lame", "dumb", "pathetic", "vile", "toxic", "miserable", "mediocre", "dull",
    "bland", "hostile", "creepy", "messy", "noisy", "rotten", "grim"};
constexpr std::string_view kTemplates[] = {
    "{S} {V} this {N}",
    "this {N} is {A}",
    "the {N} was {A} {T}",
    "what a {A} {N}",
    "{S} think the {N} is {A} and {B}",
    "{S} {V} the new {N} {T}",
    "such a {A} {N} {T}!",
    "the {N} looks {A}, {S} {V} it",
    "{S} really {V} that {N}",
    "honestly the {N} {T} was {A}",
};

std::string fill_template(std::string_view tmpl, bool positive, std::mt19937_64& rng) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '{' || i + 2 >= tmpl.size() || tmpl[i + 2] != '}') {
      out += tmpl[i];
      continue;
    }
    switch (tmpl[i + 1]) {
      case 'S': out += pick(kSubjects, rng); break;
      case 'N': out += pick(kNouns, rng); break;
      case 'T': out += pick(kTimes, rng); break;
      case 'V': out += positive ? pick(kPosVerbs, rng) : pick(kNegVerbs, rng); break;
      case 'A':
      case 'B': out += positive ? pick(kPosAdjs, rng) : pick(kNegAdjs, rng); break;
      default: out.append(tmpl.substr(i, 3));
    }
    i += 2;
  }
  return out;
}

std::string decorate(std::string s, std::mt19937_64& rng) {
  if (rng() % 100 < 20) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  if (rng() % 100 < 15) s = "@user" + std::to_string(rng() % 100) + " " + s;
  if (rng() % 100 < 15) s += std::string(" #") + std::string(pick(kNouns, rng));
  if (rng() % 100 < 10) {
    static constexpr char kAlnum[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string slug;
    for (int i = 0; i < 6; ++i) slug += kAlnum[rng() % 36];
    s += " http://t.co/" + slug;
  }
  if (rng() % 100 < 10) s += "!!";
  return s;
}

}  // namespace

CorpusSplit split_corpus(const Corpus& corpus, std::uint64_t seed, double train_frac, double valid_frac) {
  if (!corpus.labeled()) throw DomainError("only labeled corpora can be split");
  if (train_frac <= 0.0 || valid_frac < 0.0 || train_frac + valid_frac >= 1.0) {
    throw RangeError("invalid split fractions");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_idx, valid_idx, test_idx;
  for (Label label : {Label::Negative, Label::Positive}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < corpus.items.size(); ++i) {
      if (corpus.items[i].label == label) idx.push_back(i);
    }
    shuffle(idx, rng);
    const auto n_train = static_cast<std::size_t>(static_cast<double>(idx.size()) * train_frac);
    const auto n_valid = static_cast<std::size_t>(static_cast<double>(idx.size()) * valid_frac);
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + n_train);
    valid_idx.insert(valid_idx.end(), idx.begin() + n_train, idx.begin() + n_train + n_valid);
    test_idx.insert(test_idx.end(), idx.begin() + n_train + n_valid, idx.end());
  }
  auto gather = [&](std::vector<std::size_t>& idx, const char* name) {
    std::sort(idx.begin(), idx.end());
    Corpus c;
    c.source = corpus.source + "#" + name;
    for (auto i : idx) c.items.push_back(corpus.items[i]);
    return c;
  };
  return {gather(train_idx, "train"), gather(valid_idx, "valid"), gather(test_idx, "test")};
}

Corpus generate_toy_corpus(std::uint64_t seed, std::size_t per_class) {
  std::mt19937_64 rng(seed);
  std::set<std::string> seen;
  Corpus corpus;
  corpus.source = "toy:" + std::to_string(seed);
  for (bool positive : {false, true}) {
    std::size_t made = 0;
    std::size_t attempts = 0;
    while (made < per_class) {
      if (++attempts > per_class * 1000) throw Error("toy corpus generator ran out of unique sentences");
      std::string s = decorate(fill_template(pick(kTemplates, rng), positive, rng), rng);
      if (!seen.insert(s).second) continue;
      corpus.items.push_back({std::move(s), positive ? Label::Positive : Label::Negative});
      ++made;
    }
  }
  shuffle(corpus.items, rng);
  return corpus;
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

template <typename F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error("stage '" + stage + "': " + e.what());
  }
}

std::vector<double> negativity_scores(const std::vector<std::string>& texts, const SentimentLexicon& lex) {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(sentence_negativity(t, lex));
  return out;
}

}  // namespace

ExperimentReport run_experiment(const Corpus& train, const Corpus& valid, const Corpus& test,
                                const SentimentLexicon& lex, const ExperimentOptions& options) {
  ExperimentReport report;
  report.seed = options.seed;

  const auto train_set = in_stage("load", [&] { return train.labeled_items(); });
  const auto valid_set = in_stage("load", [&] { return valid.labeled_items(); });
  const auto test_set = in_stage("load", [&] { return test.labeled_items(); });
  report.train_size = train_set.size();
  report.valid_size = valid_set.size();
  report.test_size = test_set.size();

  std::vector<std::string> real;
  in_stage("poison", [&] {
    std::vector<std::string> negatives;
    for (const auto& t : test_set) {
      if (t.label == Label::Negative) negatives.push_back(t.text);
    }
    report.negative_test = negatives.size();
    const auto modifiable = poison_corpus(negatives, MaskKind::Mask1, lex, options.seed, {.discard_unmodified = true});
    for (const auto& r : modifiable.records) real.push_back(r.original);
    if (real.empty()) throw DomainError("no negative test sentence can be modified");
    report.real_size = real.size();
    report.mask1 = poison_corpus(real, MaskKind::Mask1, lex, options.seed, {.discard_unmodified = false}).records;
    report.mask2 = poison_corpus(real, MaskKind::Mask2, lex, options.seed, {.discard_unmodified = false}).records;
  });
  std::vector<std::string> mask1, mask2, sanitized;
  for (const auto& r : report.mask1) mask1.push_back(r.poisoned);
  for (const auto& r : report.mask2) {
    mask2.push_back(r.poisoned);
    sanitized.push_back(strip_invisible(std::string_view(r.poisoned)));
  }

  for (TokenLevel level : {TokenLevel::Word, TokenLevel::Char}) {
    for (OovPolicy oov : {OovPolicy::map_to_unk(), OovPolicy::discard()}) {
      FeatureSpec spec;
      spec.preprocess = options.preprocess;
      spec.tokenizer = {level, 1, 1};
      spec.oov = oov;
      spec.features = options.features;
      spec.vocab_max = level == TokenLevel::Word ? options.word_vocab : options.char_vocab;
      Hyper hyper = options.hyper;
      hyper.seed = options.seed;
      in_stage("train " + spec.label(), [&] {
        const LinearModel model = zew::train(train_set, valid_set, spec, hyper);
        ConfigurationResult res;
        res.spec = spec;
        res.epochs_run = model.trace.epochs_run;
        res.best_epoch = model.trace.best_epoch;
        res.vocab_size = model.vocab.size();
        res.report.label = spec.label();
        res.report.acc_train = evaluate_accuracy(model, train_set);
        res.report.acc_valid = evaluate_accuracy(model, valid_set);
        res.report.acc_test = evaluate_accuracy(model, test_set);
        const auto a = attack_success(model, real, mask1, mask2);
        res.report.asp_real = a.real;
        res.report.asp_mask1 = a.mask1;
        res.report.asp_mask2 = a.mask2;
        report.configurations.push_back(std::move(res));
      });
    }
  }

  in_stage("negativity", [&] {
    report.negativity.push_back(summarize(negativity_scores(real, lex), "real"));
    report.negativity.push_back(summarize(negativity_scores(mask1, lex), "mask1"));
    report.negativity.push_back(summarize(negativity_scores(mask2, lex), "mask2"));
    report.negativity.push_back(summarize(negativity_scores(sanitized, lex), "sanitized"));
  });
  return report;
}

std::string report_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "zew";
  j["tool_version"] = kToolVersion;
  j["invisible_set"] = ZeroWidthSet::kVersion;
  j["seed"] = report.seed;
  j["corpus"] = {{"train", report.train_size},
                 {"valid", report.valid_size},
                 {"test", report.test_size},
                 {"negative_test", report.negative_test},
                 {"real", report.real_size}};
  auto& configs = j["configurations"] = nlohmann::ordered_json::array();
  for (const auto& c : report.configurations) {
    configs.push_back({{"label", c.report.label},
                       {"tokenization", to_string(c.spec.tokenizer.level)},
                       {"ngram", {c.spec.tokenizer.ngram_lo, c.spec.tokenizer.ngram_hi}},
                       {"oov", to_string(c.spec.oov)},
                       {"features", to_string(c.spec.features)},
                       {"vocab_size", c.vocab_size},
                       {"epochs_run", c.epochs_run},
                       {"best_epoch", c.best_epoch},
                       {"acc_train", c.report.acc_train},
                       {"acc_valid", c.report.acc_valid},
                       {"acc_test", c.report.acc_test},
                       {"asp_real", c.report.asp_real},
                       {"asp_mask1", c.report.asp_mask1},
                       {"asp_mask2", c.report.asp_mask2}});
  }
  auto& neg = j["negativity"] = nlohmann::ordered_json::array();
  for (const auto& d : report.negativity) {
    neg.push_back({{"label", d.label}, {"median", d.median}, {"q1", d.q1}, {"q3", d.q3},
                   {"min", d.min}, {"max", d.max}, {"n", d.n()}});
  }
  return j.dump(2) + "\n";
}

std::string results_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "config,tokenization,oov,features,acc_train,acc_valid,acc_test,asp_real,asp_mask1,asp_mask2\n";
  for (const auto& c : report.configurations) {
    const auto& r = c.report;
    out << r.label << ',' << to_string(c.spec.tokenizer.level) << ',' << to_string(c.spec.oov) << ','
        << to_string(c.spec.features) << ',' << format_double(r.acc_train) << ',' << format_double(r.acc_valid)
        << ',' << format_double(r.acc_test) << ',' << format_double(r.asp_real) << ','
        << format_double(r.asp_mask1) << ',' << format_double(r.asp_mask2) << '\n';
  }
  return out.str();
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& dir, bool overwrite) {
  std::ostringstream dist, scores, poisoned;
  dist << summary_csv_header() << '\n';
  scores << "corpus,index,negativity\n";
  for (const auto& d : report.negativity) {
    if (d.values.empty()) throw StateError("refusing to emit an empty distribution '" + d.label + "'");
    dist << summary_csv_row(d) << '\n';
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      scores << d.label << ',' << i << ',' << format_double(d.values[i]) << '\n';
    }
  }
  for (const auto& r : report.mask1) poisoned << to_json_line(r) << '\n';
  for (const auto& r : report.mask2) poisoned << to_json_line(r) << '\n';

  const std::pair<std::string, std::string> files[] = {
      {"report.json", report_json(report)},
      {"results.csv", results_csv(report)},
      {"distributions.csv", dist.str()},
      {"negativity_scores.csv", scores.str()},
      {"poisoned.jsonl", poisoned.str()},
  };
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  if (!overwrite) {
    for (const auto& [name, body] : files) {
      if (std::filesystem::exists(dir / name)) {
        throw Error("refusing to overwrite " + (dir / name).string() + " (pass --overwrite)");
      }
    }
  }
  for (const auto& [name, body] : files) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) throw Error("cannot write " + path.string());
  }
}

}  // namespace zew
