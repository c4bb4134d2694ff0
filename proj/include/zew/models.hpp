#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zew/metrics.hpp"
#include "zew/pipeline.hpp"

namespace zew {

struct LabeledText {
  std::string text;
  Label label;
};

// Everything needed to turn raw text into the feature vector a model sees.
struct FeatureSpec {
  PreprocessConfig preprocess;
  TokenizerSpec tokenizer;
  OovPolicy oov = OovPolicy::map_to_unk();
  BagKind features = BagKind::TfIdf;
  std::size_t vocab_max = 25000;

  // e.g. "word-unk-tfidf"
  std::string label() const;
};

struct Hyper {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int max_epochs = 100;
  int patience = 5;
  std::uint64_t seed = 0;
};

struct TrainingTrace {
  int epochs_run = 0;
  int best_epoch = 0;
  std::vector<double> valid_accuracy;  // one entry per epoch
};

// Logistic regression over bag-of-tokens features. weights.size() == vocab.size().
struct LinearModel {
  FeatureSpec spec;
  Vocabulary vocab;
  IdfTable idf;
  std::vector<double> weights;
  double bias = 0.0;
  TrainingTrace trace;

  SparseVector features(std::string_view text) const;
  double decision(std::string_view text) const;  // w·x + b
};

struct Prediction {
  Label label;
  double score;  // P(positive)
};

double sigmoid(double z) noexcept;

// Mean logistic loss plus (l2/2)·|w|², with its analytic gradient.
class LogisticObjective {
 public:
  LogisticObjective(std::span<const SparseVector> x, std::span<const double> y, double l2)
      : x_(x), y_(y), l2_(l2) {}

  double value(std::span<const double> w, double b) const;
  // Writes dL/dw into grad_w (resized) and returns dL/db.
  double gradient(std::span<const double> w, double b, std::vector<double>& grad_w) const;

 private:
  std::span<const SparseVector> x_;
  std::span<const double> y_;
  double l2_;
};

// Builds the vocabulary (and idf) on the training split, then runs per-sample
// SGD on the logistic loss with seeded shuffling. Stops after max_epochs or
// when validation accuracy has not improved for `patience` epochs, and
// returns the best-validation snapshot. Throws DomainError for an empty
// split or a single-class training set.
LinearModel train(std::span<const LabeledText> train_set, std::span<const LabeledText> valid_set,
                  const FeatureSpec& spec, const Hyper& hyper);

Prediction predict(const LinearModel& model, std::string_view text);

// Percentage of correct labels; throws DomainError on an empty corpus.
double evaluate_accuracy(const LinearModel& model, std::span<const LabeledText> corpus);

// Per-configuration evaluation row.
struct AttackReport {
  std::string label;
  double acc_train = 0.0;
  double acc_valid = 0.0;
  double acc_test = 0.0;
  double asp_real = 0.0;
  double asp_mask1 = 0.0;
  double asp_mask2 = 0.0;
};

struct AspTriple {
  double real;
  double mask1;
  double mask2;
};

// Corpora must be aligned (same length); throws DomainError otherwise.
AspTriple attack_success(const LinearModel& model, std::span<const std::string> real,
                         std::span<const std::string> mask1, std::span<const std::string> mask2);

// Writes model.txt (versioned header, `index<TAB>weight` lines, bias last),
// vocab.tsv and, for TF-IDF, idf.tsv into dir.
void save_model(const LinearModel& model, const std::filesystem::path& dir);
LinearModel load_model(const std::filesystem::path& dir);

}  // namespace zew
