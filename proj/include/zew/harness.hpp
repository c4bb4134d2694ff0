#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zew/attack.hpp"
#include "zew/lexicon.hpp"
#include "zew/metrics.hpp"
#include "zew/models.hpp"

namespace zew {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct CorpusItem {
  std::string text;
  std::optional<Label> label;
};

// Either every item is labeled or none is.
struct Corpus {
  std::vector<CorpusItem> items;
  std::string source;

  bool labeled() const noexcept;
  std::size_t size() const noexcept { return items.size(); }
  std::vector<std::string> texts() const;
  // Throws DomainError for an unlabeled corpus.
  std::vector<LabeledText> labeled_items() const;
};

enum class CorpusFormat { Lines, LabeledCsv };

CorpusFormat parse_corpus_format(std::string_view name);

// Lines: one text per non-empty line. LabeledCsv: `label,text` records with
// RFC 4180 quoting, label in {0,1}; an optional `label,text` header row is
// skipped. Errors carry the 1-based line number.
Corpus parse_corpus(std::istream& in, CorpusFormat format, std::string source = {});
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

void write_labeled_csv(std::ostream& out, const Corpus& corpus);
std::string csv_quote(std::string_view field);

struct CorpusSplit {
  Corpus train;
  Corpus valid;
  Corpus test;
};

// Stratified by label; default 70/10/20.
CorpusSplit split_corpus(const Corpus& corpus, std::uint64_t seed, double train_frac = 0.7,
                         double valid_frac = 0.1);

// Balanced synthetic sentiment corpus built from templates and starter
// lexicon words; texts are unique.
Corpus generate_toy_corpus(std::uint64_t seed, std::size_t per_class = 300);

struct ExperimentOptions {
  std::uint64_t seed = 42;
  Hyper hyper;
  BagKind features = BagKind::TfIdf;
  PreprocessConfig preprocess{.lowercase = true, .strip_social = true};
  std::size_t word_vocab = 25000;
  std::size_t char_vocab = 100;
};

struct ConfigurationResult {
  FeatureSpec spec;
  AttackReport report;
  int epochs_run = 0;
  int best_epoch = 0;
  std::size_t vocab_size = 0;
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t valid_size = 0;
  std::size_t test_size = 0;
  std::size_t negative_test = 0;
  std::size_t real_size = 0;  // negative test sentences the manipulation can modify
  std::vector<ConfigurationResult> configurations;
  std::vector<ScoreDistribution> negativity;  // real, mask1, mask2, sanitized
  std::vector<ManipulationRecord> mask1;
  std::vector<ManipulationRecord> mask2;
};

// Builds Real/Mask1/Mask2, trains {word, char} x {unk, discard}, evaluates
// ACC and ASP, and summarizes lexicon negativity. Deterministic in the seed.
ExperimentReport run_experiment(const Corpus& train, const Corpus& valid, const Corpus& test,
                                const SentimentLexicon& lex, const ExperimentOptions& options);

std::string report_json(const ExperimentReport& report);
std::string results_csv(const ExperimentReport& report);

// Writes report.json, results.csv, distributions.csv, negativity_scores.csv
// and poisoned.jsonl. Refuses to overwrite existing files unless asked.
void emit_report(const ExperimentReport& report, const std::filesystem::path& dir, bool overwrite);

}  // namespace zew
