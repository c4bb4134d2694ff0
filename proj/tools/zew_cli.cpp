// zew: command-line front end for the zero-width attack toolkit.
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 detections present.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zew/attack.hpp"
#include "zew/codepoints.hpp"
#include "zew/defense.hpp"
#include "zew/error.hpp"
#include "zew/harness.hpp"
#include "zew/lexicon.hpp"
#include "zew/metrics.hpp"
#include "zew/models.hpp"
#include "zew/pipeline.hpp"
#include "zew/utf8.hpp"

namespace {

using namespace zew;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDetected = 3;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!path.empty() && path != "-") {
    file.open(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path);
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  int lineno = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!utf8::is_valid(line)) throw ParseError("invalid UTF-8", lineno);
    lines.push_back(std::move(line));
  }
  return lines;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error("cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_ = &std::cout;
};

SentimentLexicon lexicon_from(const std::string& path, double threshold) {
  if (path.empty()) {
    if (threshold == SentimentLexicon::kDefaultNegativeThreshold) return starter_lexicon();
    SentimentLexicon lex(threshold);
    for (const auto& [word, valence] : starter_lexicon().entries()) lex.set(word, valence);
    return lex;
  }
  return load_lexicon_file(path, threshold);
}

Corpus labeled_corpus(const std::string& path) {
  auto c = load_corpus(path, CorpusFormat::LabeledCsv);
  if (!c.labeled() || c.size() == 0) throw DomainError("corpus " + path + " has no labeled items");
  return c;
}

std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += '\t';
    out += tokens[i];
  }
  return out;
}

// Shared feature-pipeline flags.
struct FeatureFlags {
  std::string level = "word";
  std::vector<int> ngram = {1, 1};
  std::string oov = "unk";
  bool lowercase = false;
  bool strip_social = false;
  bool stopwords = false;
  bool stem = false;

  void attach(CLI::App* app) {
    app->add_option("--level", level, "Tokenization level")->check(CLI::IsMember({"word", "char"}));
    app->add_option("--ngram", ngram, "N-gram range LO HI")->expected(2);
    app->add_option("--oov", oov, "OOV policy: unk, discard or placeholders:K");
    app->add_flag("--lowercase", lowercase, "Lowercase before tokenizing");
    app->add_flag("--strip-social", strip_social, "Remove hashtags, mentions and URLs");
    app->add_flag("--remove-stopwords", stopwords, "Drop English stopwords (word level)");
    app->add_flag("--stem", stem, "Apply suffix stemming (word level)");
  }
  PreprocessConfig preprocess() const { return {lowercase, strip_social, stopwords, stem}; }
  TokenizerSpec tokenizer() const {
    TokenizerSpec t{parse_token_level(level), ngram.at(0), ngram.at(1)};
    t.validate();
    return t;
  }
};

int cmd_charset(const std::string& out_path) {
  Output out(out_path);
  *out << "# " << ZeroWidthSet::kVersion << '\n';
  zero_width_set().write(*out);
  return kExitOk;
}

struct InjectArgs {
  std::string input, output, lexicon, mask = "2", alphabet = "full";
  std::uint64_t seed = 0;
  double threshold = SentimentLexicon::kDefaultNegativeThreshold;
  bool keep_unmodified = false;
  bool jsonl = false;
};

int cmd_inject(const InjectArgs& a) {
  const auto lex = lexicon_from(a.lexicon, a.threshold);
  const auto lines = read_lines(a.input);
  PoisonOptions opts;
  opts.discard_unmodified = !a.keep_unmodified;
  opts.alphabet = a.alphabet == "space" ? InjectionAlphabet::SpaceOnly : InjectionAlphabet::FullSet;
  const auto poisoned = poison_corpus(lines, parse_mask(a.mask), lex, a.seed, opts);
  Output out(a.output);
  for (const auto& r : poisoned.records) *out << (a.jsonl ? to_json_line(r) : r.poisoned) << '\n';
  std::cerr << "modified " << poisoned.stats.modified << ", unmodified " << poisoned.stats.unmodified
            << ", discarded " << poisoned.stats.discarded << '\n';
  return kExitOk;
}

int cmd_sanitize(const std::string& input, const std::string& output) {
  Output out(output);
  for (const auto& line : read_lines(input)) *out << strip_invisible(std::string_view(line)) << '\n';
  return kExitOk;
}

int cmd_detect(const std::string& input, const std::string& output) {
  Output out(output);
  bool any = false;
  for (const auto& line : read_lines(input)) {
    const auto report = detect(std::string_view(line));
    any = any || report.flagged;
    *out << to_json_line(report) << '\n';
  }
  return any ? kExitDetected : kExitOk;
}

int cmd_guard(const std::string& input, const std::string& output, const std::string& policy) {
  Output out(output);
  bool rejected = false;
  const auto lines = read_lines(input);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto result = guard(lines[i], parse_guard_policy(policy));
    if (const auto* r = std::get_if<Rejection>(&result)) {
      rejected = true;
      std::cerr << "line " << i + 1 << ": rejected " << to_json_line(r->report) << '\n';
    } else {
      *out << std::get<std::string>(result) << '\n';
    }
  }
  return rejected ? kExitDetected : kExitOk;
}

int cmd_tokenize(const FeatureFlags& f, const std::string& input, const std::string& output) {
  Output out(output);
  const auto pre = f.preprocess();
  const auto tok = f.tokenizer();
  for (const auto& line : read_lines(input)) *out << join_tokens(analyze(line, pre, tok)) << '\n';
  return kExitOk;
}

struct EncodeArgs {
  FeatureFlags features;
  std::string fit, input, output, kind = "count";
  std::size_t vocab_max = 25000;
  std::size_t dim = 8;
  std::uint64_t seed = 0;
  bool seeded = false;
};

int cmd_encode(const EncodeArgs& a) {
  const auto pre = a.features.preprocess();
  const auto tok = a.features.tokenizer();
  const auto policy = parse_oov_policy(a.features.oov);
  const auto kind = parse_encode_kind(a.kind);
  if (kind == EncodeKind::Dense && !a.seeded) throw CLI::RequiredError("--seed (dense encoding is randomized)");

  std::vector<Tokens> fit_docs;
  for (const auto& line : read_lines(a.fit)) fit_docs.push_back(analyze(line, pre, tok));
  const auto vocab = build_vocab(fit_docs, a.vocab_max, policy);
  IdfTable idf;
  if (kind == EncodeKind::TfIdf) {
    std::vector<std::vector<TokenId>> ids;
    for (const auto& d : fit_docs) ids.push_back(index(d, vocab, policy));
    idf = IdfTable::fit(ids, vocab.size());
  }
  EncodeOptions opts{kind, &idf, a.dim, a.seed};

  Output out(a.output);
  for (const auto& line : read_lines(a.input)) {
    const auto tokens = analyze(line, pre, tok);
    const auto ids = index(tokens, vocab, policy);
    nlohmann::json j;
    std::vector<std::string> shown;
    for (auto id : ids) shown.push_back(vocab.token_of(id));
    j["tokens"] = shown;
    j["ids"] = ids;
    j["vectors"] = encode(ids, vocab, opts);
    *out << j.dump() << '\n';
  }
  return kExitOk;
}

struct TrainArgs {
  FeatureFlags features;
  std::string data, train_path, valid_path, out_dir, bag = "tfidf";
  std::size_t vocab_max = 25000;
  std::uint64_t seed = 0;
  Hyper hyper;
};

int cmd_train(const TrainArgs& a) {
  Corpus train_c, valid_c;
  if (!a.data.empty()) {
    auto split = split_corpus(labeled_corpus(a.data), a.seed);
    train_c = std::move(split.train);
    valid_c = std::move(split.valid);
  } else {
    if (a.train_path.empty() || a.valid_path.empty()) {
      throw CLI::ValidationError("train", "give --data, or both --train and --valid");
    }
    train_c = labeled_corpus(a.train_path);
    valid_c = labeled_corpus(a.valid_path);
  }
  FeatureSpec spec;
  spec.preprocess = a.features.preprocess();
  spec.tokenizer = a.features.tokenizer();
  spec.oov = parse_oov_policy(a.features.oov);
  spec.features = parse_bag_kind(a.bag);
  spec.vocab_max = a.vocab_max;
  Hyper hyper = a.hyper;
  hyper.seed = a.seed;
  const auto model = train(train_c.labeled_items(), valid_c.labeled_items(), spec, hyper);
  save_model(model, a.out_dir);
  std::cerr << spec.label() << ": vocab " << model.vocab.size() << ", epochs " << model.trace.epochs_run
            << ", best " << model.trace.best_epoch << ", acc_valid "
            << format_double(evaluate_accuracy(model, valid_c.labeled_items())) << '\n';
  return kExitOk;
}

int cmd_predict(const std::string& model_dir, const std::string& input, const std::string& output) {
  const auto model = load_model(model_dir);
  Output out(output);
  for (const auto& line : read_lines(input)) {
    const auto p = predict(model, line);
    *out << to_int(p.label) << '\t' << format_double(p.score) << '\n';
  }
  return kExitOk;
}

struct AttackEvalArgs {
  std::string model_dir, test, lexicon;
  std::uint64_t seed = 0;
  double threshold = SentimentLexicon::kDefaultNegativeThreshold;
};

int cmd_attack_eval(const AttackEvalArgs& a) {
  const auto model = load_model(a.model_dir);
  const auto lex = lexicon_from(a.lexicon, a.threshold);
  std::vector<std::string> negatives;
  for (const auto& item : labeled_corpus(a.test).labeled_items()) {
    if (item.label == Label::Negative) negatives.push_back(item.text);
  }
  const auto real = poison_corpus(negatives, MaskKind::Mask1, lex, a.seed).records;
  if (real.empty()) throw DomainError("no negative sentence can be modified");
  std::vector<std::string> real_texts;
  for (const auto& r : real) real_texts.push_back(r.original);
  const auto m1 = poison_corpus(real_texts, MaskKind::Mask1, lex, a.seed, {.discard_unmodified = false}).texts();
  const auto m2 = poison_corpus(real_texts, MaskKind::Mask2, lex, a.seed, {.discard_unmodified = false}).texts();
  const auto asp3 = attack_success(model, real_texts, m1, m2);
  nlohmann::ordered_json j;
  j["config"] = model.spec.label();
  j["n"] = real_texts.size();
  j["asp_real"] = asp3.real;
  j["asp_mask1"] = asp3.mask1;
  j["asp_mask2"] = asp3.mask2;
  std::cout << j.dump() << '\n';
  return kExitOk;
}

struct ExperimentArgs {
  std::string data, lexicon, out_dir;
  std::uint64_t seed = 0;
  bool overwrite = false;
  double threshold = SentimentLexicon::kDefaultNegativeThreshold;
  ExperimentOptions options;
  std::string features = "tfidf";
};

int cmd_experiment(ExperimentArgs a) {
  const auto t0 = std::chrono::steady_clock::now();
  const Corpus corpus = a.data.empty() ? generate_toy_corpus(a.seed) : labeled_corpus(a.data);
  const auto split = split_corpus(corpus, a.seed);
  a.options.seed = a.seed;
  a.options.features = parse_bag_kind(a.features);
  const auto lex = lexicon_from(a.lexicon, a.threshold);
  const auto report = run_experiment(split.train, split.valid, split.test, lex, a.options);
  emit_report(report, a.out_dir, a.overwrite);
  std::cout << results_csv(report);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  std::cerr << "experiment finished in " << format_double(dt.count()) << " s\n";
  return kExitOk;
}

std::vector<double> read_numbers(const std::string& input) {
  std::vector<double> out;
  const auto lines = read_lines(input);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(lines[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != lines[i].size()) throw ParseError("not a number", static_cast<int>(i + 1));
    out.push_back(v);
  }
  return out;
}

std::set<std::string> token_set(const std::string& text) {
  const auto words = split_whitespace(text);
  return {words.begin(), words.end()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-width character attack toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto randomized_seed = [](CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "Random seed")->required();
  };

  std::string input, output;
  auto io = [&](CLI::App* sub) {
    sub->add_option("-i,--input", input, "Input file, one text per line (default stdin)");
    sub->add_option("-o,--output", output, "Output file (default stdout)");
  };

  auto* charset = app.add_subcommand("charset", "Print the invisible codepoint set");
  charset->add_option("-o,--output", output, "Output file (default stdout)");

  std::uint64_t toy_seed = 0;
  std::size_t toy_per_class = 300;
  auto* toy = app.add_subcommand("toy-corpus", "Generate the synthetic labeled corpus as CSV");
  randomized_seed(toy, toy_seed);
  toy->add_option("--per-class", toy_per_class, "Sentences per label")->check(CLI::PositiveNumber);
  toy->add_option("-o,--output", output, "Output file (default stdout)");

  InjectArgs inject_args;
  auto* inject = app.add_subcommand("inject", "Poison sentences by hiding invisible codepoints in negative words");
  io(inject);
  randomized_seed(inject, inject_args.seed);
  inject->add_option("--mask", inject_args.mask, "1: one codepoint mid-word, 2: between every character")
      ->check(CLI::IsMember({"1", "2"}));
  inject->add_option("--lexicon", inject_args.lexicon, "Lexicon TSV (default: built-in starter lexicon)");
  inject->add_option("--threshold", inject_args.threshold, "Negative valence threshold");
  inject->add_option("--alphabet", inject_args.alphabet, "Injected codepoints")
      ->check(CLI::IsMember({"full", "space"}));
  inject->add_flag("--keep-unmodified", inject_args.keep_unmodified, "Emit sentences with no negative word");
  inject->add_flag("--jsonl", inject_args.jsonl, "Emit full manipulation records");

  auto* sanitize = app.add_subcommand("sanitize", "Remove invisible codepoints");
  io(sanitize);

  auto* detect_cmd = app.add_subcommand("detect", "Report invisible codepoints per line (exit 3 if any)");
  io(detect_cmd);

  std::string guard_policy = "reject";
  auto* guard_cmd = app.add_subcommand("guard", "Reject or strip lines with invisible codepoints");
  io(guard_cmd);
  guard_cmd->add_option("--policy", guard_policy, "reject or strip")->check(CLI::IsMember({"reject", "strip"}));

  FeatureFlags tok_flags;
  auto* tokenize_cmd = app.add_subcommand("tokenize", "Print tokens, tab separated");
  io(tokenize_cmd);
  tok_flags.attach(tokenize_cmd);

  EncodeArgs encode_args;
  auto* encode_cmd = app.add_subcommand("encode", "Encode lines against a vocabulary fitted on --fit");
  io(encode_cmd);
  encode_args.features.attach(encode_cmd);
  encode_cmd->add_option("--fit", encode_args.fit, "Lines used to build the vocabulary")->required();
  encode_cmd->add_option("--kind", encode_args.kind, "count, tfidf, onehot or dense")
      ->check(CLI::IsMember({"count", "tfidf", "onehot", "dense"}));
  encode_cmd->add_option("--vocab-max", encode_args.vocab_max, "Vocabulary size cap")->check(CLI::PositiveNumber);
  encode_cmd->add_option("--dim", encode_args.dim, "Dense embedding width")->check(CLI::PositiveNumber);
  encode_cmd->add_option("--seed", encode_args.seed, "Random seed (required for dense)");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a linear sentiment model");
  train_args.features.attach(train_cmd);
  randomized_seed(train_cmd, train_args.seed);
  train_cmd->add_option("--data", train_args.data, "Labeled CSV to split 70/10/20");
  train_cmd->add_option("--train", train_args.train_path, "Labeled CSV training split");
  train_cmd->add_option("--valid", train_args.valid_path, "Labeled CSV validation split");
  train_cmd->add_option("--out", train_args.out_dir, "Model directory")->required();
  train_cmd->add_option("--features", train_args.bag, "count or tfidf")->check(CLI::IsMember({"count", "tfidf"}));
  train_cmd->add_option("--vocab-max", train_args.vocab_max, "Vocabulary size cap")->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train_args.hyper.learning_rate, "Learning rate");
  train_cmd->add_option("--l2", train_args.hyper.l2, "L2 penalty");
  train_cmd->add_option("--max-epochs", train_args.hyper.max_epochs, "Epoch limit");
  train_cmd->add_option("--patience", train_args.hyper.patience, "Early stopping patience");

  std::string model_dir;
  auto* predict_cmd = app.add_subcommand("predict", "Print label and P(positive) per line");
  io(predict_cmd);
  predict_cmd->add_option("--model", model_dir, "Model directory")->required();

  AttackEvalArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack-eval", "ASP of a model on Real, Mask1 and Mask2");
  randomized_seed(attack_cmd, attack_args.seed);
  attack_cmd->add_option("--model", attack_args.model_dir, "Model directory")->required();
  attack_cmd->add_option("--test", attack_args.test, "Labeled CSV")->required();
  attack_cmd->add_option("--lexicon", attack_args.lexicon, "Lexicon TSV");
  attack_cmd->add_option("--threshold", attack_args.threshold, "Negative valence threshold");

  auto* metrics = app.add_subcommand("metrics", "Similarity and distribution measures");
  metrics->require_subcommand(1);
  std::string ref_text, cand_text;
  auto* bleu_cmd = metrics->add_subcommand("bleu", "Sentence BLEU-4 over whitespace tokens");
  bleu_cmd->add_option("reference", ref_text)->required();
  bleu_cmd->add_option("candidate", cand_text)->required();
  auto* jaccard_cmd = metrics->add_subcommand("jaccard", "Jaccard similarity of whitespace token sets");
  jaccard_cmd->add_option("a", ref_text)->required();
  jaccard_cmd->add_option("b", cand_text)->required();
  std::string summary_label;
  auto* summarize_cmd = metrics->add_subcommand("summarize", "Median, quartiles and range of numbers, one per line");
  io(summarize_cmd);
  summarize_cmd->add_option("--label", summary_label, "Label for the record");
  std::string neg_lexicon;
  double neg_threshold = SentimentLexicon::kDefaultNegativeThreshold;
  auto* negativity_cmd = metrics->add_subcommand("negativity", "Lexicon negativity score per line");
  io(negativity_cmd);
  negativity_cmd->add_option("--lexicon", neg_lexicon, "Lexicon TSV");
  negativity_cmd->add_option("--threshold", neg_threshold, "Negative valence threshold");

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Run the full attack experiment and write a report");
  randomized_seed(experiment, exp_args.seed);
  experiment->add_option("--data", exp_args.data, "Labeled CSV (default: toy corpus generated from --seed)");
  experiment->add_option("--lexicon", exp_args.lexicon, "Lexicon TSV");
  experiment->add_option("--threshold", exp_args.threshold, "Negative valence threshold");
  experiment->add_option("--out", exp_args.out_dir, "Report directory")->required();
  experiment->add_flag("--overwrite", exp_args.overwrite, "Replace existing report files");
  experiment->add_option("--features", exp_args.features, "count or tfidf")
      ->check(CLI::IsMember({"count", "tfidf"}));
  experiment->add_option("--word-vocab", exp_args.options.word_vocab, "Word vocabulary cap")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--char-vocab", exp_args.options.char_vocab, "Char vocabulary cap")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--lr", exp_args.options.hyper.learning_rate, "Learning rate");
  experiment->add_option("--l2", exp_args.options.hyper.l2, "L2 penalty");
  experiment->add_option("--max-epochs", exp_args.options.hyper.max_epochs, "Epoch limit");
  experiment->add_option("--patience", exp_args.options.hyper.patience, "Early stopping patience");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (charset->parsed()) return cmd_charset(output);
    if (toy->parsed()) {
      Output out(output);
      write_labeled_csv(*out, generate_toy_corpus(toy_seed, toy_per_class));
      return kExitOk;
    }
    if (inject->parsed()) {
      inject_args.input = input;
      inject_args.output = output;
      return cmd_inject(inject_args);
    }
    if (sanitize->parsed()) return cmd_sanitize(input, output);
    if (detect_cmd->parsed()) return cmd_detect(input, output);
    if (guard_cmd->parsed()) return cmd_guard(input, output, guard_policy);
    if (tokenize_cmd->parsed()) return cmd_tokenize(tok_flags, input, output);
    if (encode_cmd->parsed()) {
      encode_args.input = input;
      encode_args.output = output;
      encode_args.seeded = encode_cmd->count("--seed") > 0;
      return cmd_encode(encode_args);
    }
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (predict_cmd->parsed()) return cmd_predict(model_dir, input, output);
    if (attack_cmd->parsed()) return cmd_attack_eval(attack_args);
    if (bleu_cmd->parsed()) {
      std::cout << format_double(bleu4(ref_text, cand_text)) << '\n';
      return kExitOk;
    }
    if (jaccard_cmd->parsed()) {
      std::cout << format_double(jaccard(token_set(ref_text), token_set(cand_text))) << '\n';
      return kExitOk;
    }
    if (summarize_cmd->parsed()) {
      Output out(output);
      *out << summary_csv_header() << '\n' << summary_csv_row(summarize(read_numbers(input), summary_label)) << '\n';
      return kExitOk;
    }
    if (negativity_cmd->parsed()) {
      const auto lex = lexicon_from(neg_lexicon, neg_threshold);
      Output out(output);
      for (const auto& line : read_lines(input)) *out << format_double(sentence_negativity(line, lex)) << '\n';
      return kExitOk;
    }
    if (experiment->parsed()) return cmd_experiment(exp_args);
  } catch (const CLI::Error& e) {
    std::cerr << "zew: " << e.what() << '\n';
    return kExitUsage;
  } catch (const zew::Error& e) {
    std::cerr << "zew: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "zew: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
