#include "zew/models.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "zew/error.hpp"

namespace zew {

namespace {

constexpr std::string_view kModelHeader = "#zew-model v1";

// Fisher-Yates with a plain modulo so shuffles are identical across
// standard library implementations.
void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
}

std::vector<Label> predict_all(const LinearModel& model, std::span<const std::string> texts) {
  std::vector<Label> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(predict(model, t).label);
  return out;
}

double accuracy_of(std::span<const SparseVector> x, std::span<const Label> y, std::span<const double> w,
                   double b) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Label guess = x[i].dot(w) + b >= 0.0 ? Label::Positive : Label::Negative;
    if (guess == y[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(x.size());
}

std::string bool_str(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string FeatureSpec::label() const {
  return std::string(to_string(tokenizer.level)) + "-" + to_string(oov) + "-" + std::string(to_string(features));
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

SparseVector LinearModel::features(std::string_view text) const {
  const Tokens toks = analyze(text, spec.preprocess, spec.tokenizer);
  const auto ids = index(toks, vocab, spec.oov);
  return bag_of_tokens(ids, vocab.size(), spec.features, spec.features == BagKind::TfIdf ? &idf : nullptr);
}

double LinearModel::decision(std::string_view text) const {
  if (weights.size() != vocab.size()) throw StateError("model weights do not match the vocabulary");
  return features(text).dot(weights) + bias;
}

double LogisticObjective::value(std::span<const double> w, double b) const {
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double z = x_[i].dot(w) + b;
    // log(1 + e^z) - y z, computed stably
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss += softplus - y_[i] * z;
  }
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return loss / static_cast<double>(x_.size()) + 0.5 * l2_ * reg;
}

double LogisticObjective::gradient(std::span<const double> w, double b, std::vector<double>& grad_w) const {
  grad_w.assign(w.size(), 0.0);
  double grad_b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double r = (sigmoid(x_[i].dot(w) + b) - y_[i]) * inv_n;
    for (const auto& [id, v] : x_[i].entries) grad_w[id] += r * v;
    grad_b += r;
  }
  for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] += l2_ * w[j];
  return grad_b;
}

LinearModel train(std::span<const LabeledText> train_set, std::span<const LabeledText> valid_set,
                  const FeatureSpec& spec, const Hyper& hyper) {
  if (train_set.empty()) throw DomainError("empty training set");
  if (valid_set.empty()) throw DomainError("empty validation set");
  const auto positives = std::count_if(train_set.begin(), train_set.end(),
                                       [](const LabeledText& t) { return t.label == Label::Positive; });
  if (positives == 0 || static_cast<std::size_t>(positives) == train_set.size()) {
    throw DomainError("training set contains a single class");
  }
  if (hyper.max_epochs < 1 || hyper.patience < 1) throw RangeError("max_epochs and patience must be >= 1");
  if (!(hyper.learning_rate > 0.0) || hyper.l2 < 0.0) throw RangeError("invalid learning rate or l2");
  spec.tokenizer.validate();

  LinearModel model;
  model.spec = spec;

  std::vector<Tokens> train_tokens;
  train_tokens.reserve(train_set.size());
  for (const auto& t : train_set) train_tokens.push_back(analyze(t.text, spec.preprocess, spec.tokenizer));
  model.vocab = build_vocab(train_tokens, spec.vocab_max, spec.oov);

  std::vector<std::vector<TokenId>> train_ids;
  train_ids.reserve(train_tokens.size());
  for (const auto& toks : train_tokens) train_ids.push_back(index(toks, model.vocab, spec.oov));
  if (spec.features == BagKind::TfIdf) model.idf = IdfTable::fit(train_ids, model.vocab.size());

  const std::size_t dim = model.vocab.size();
  const IdfTable* idf = spec.features == BagKind::TfIdf ? &model.idf : nullptr;
  std::vector<SparseVector> x;
  std::vector<double> y;
  x.reserve(train_ids.size());
  for (std::size_t i = 0; i < train_ids.size(); ++i) {
    x.push_back(bag_of_tokens(train_ids[i], dim, spec.features, idf));
    y.push_back(train_set[i].label == Label::Positive ? 1.0 : 0.0);
  }
  std::vector<SparseVector> vx;
  std::vector<Label> vy;
  for (const auto& t : valid_set) {
    vx.push_back(bag_of_tokens(index(analyze(t.text, spec.preprocess, spec.tokenizer), model.vocab, spec.oov),
                               dim, spec.features, idf));
    vy.push_back(t.label);
  }

  // w = scale * v keeps the per-step L2 shrink O(1).
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::vector<double> w(dim, 0.0);
  auto materialize = [&] {
    for (std::size_t j = 0; j < dim; ++j) w[j] = scale * v[j];
  };

  std::mt19937_64 rng(hyper.seed);
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double best_acc = -1.0;
  int since_best = 0;
  const double shrink = 1.0 - hyper.learning_rate * hyper.l2;
  for (int epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t i : order) {
      const double z = scale * x[i].dot(v) + bias;
      const double g = sigmoid(z) - y[i];
      if (shrink > 0.0) {
        scale *= shrink;
      } else {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      }
      if (scale < 1e-9) {
        for (auto& vj : v) vj *= scale;
        scale = 1.0;
      }
      const double step = hyper.learning_rate * g / scale;
      for (const auto& [id, val] : x[i].entries) v[id] -= step * val;
      bias -= hyper.learning_rate * g;
    }
    materialize();
    const double acc = accuracy_of(vx, vy, w, bias);
    model.trace.valid_accuracy.push_back(acc);
    model.trace.epochs_run = epoch;
    if (acc > best_acc) {
      best_acc = acc;
      since_best = 0;
      model.weights = w;
      model.bias = bias;
      model.trace.best_epoch = epoch;
    } else if (++since_best >= hyper.patience) {
      break;
    }
  }
  return model;
}

Prediction predict(const LinearModel& model, std::string_view text) {
  const double z = model.decision(text);
  return {z >= 0.0 ? Label::Positive : Label::Negative, sigmoid(z)};
}

double evaluate_accuracy(const LinearModel& model, std::span<const LabeledText> corpus) {
  if (corpus.empty()) throw DomainError("accuracy of an empty corpus");
  std::size_t correct = 0;
  for (const auto& t : corpus) {
    if (predict(model, t.text).label == t.label) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(corpus.size());
}

AspTriple attack_success(const LinearModel& model, std::span<const std::string> real,
                         std::span<const std::string> mask1, std::span<const std::string> mask2) {
  if (real.size() != mask1.size() || real.size() != mask2.size()) {
    throw DomainError("real/mask1/mask2 corpora are not aligned");
  }
  return {asp(predict_all(model, real)), asp(predict_all(model, mask1)), asp(predict_all(model, mask2))};
}

void save_model(const LinearModel& model, const std::filesystem::path& dir) {
  if (model.weights.size() != model.vocab.size()) throw StateError("model weights do not match the vocabulary");
  std::filesystem::create_directories(dir);
  const auto& s = model.spec;
  {
    std::ofstream out(dir / "model.txt");
    if (!out) throw Error("cannot write " + (dir / "model.txt").string());
    out.precision(17);
    out << kModelHeader << '\n'
        << "#level=" << to_string(s.tokenizer.level) << '\n'
        << "#ngram=" << s.tokenizer.ngram_lo << ',' << s.tokenizer.ngram_hi << '\n'
        << "#oov=" << to_string(s.oov) << '\n'
        << "#features=" << to_string(s.features) << '\n'
        << "#vocab_max=" << s.vocab_max << '\n'
        << "#lowercase=" << bool_str(s.preprocess.lowercase) << '\n'
        << "#strip_social=" << bool_str(s.preprocess.strip_social) << '\n'
        << "#remove_stopwords=" << bool_str(s.preprocess.remove_stopwords) << '\n'
        << "#apply_stem=" << bool_str(s.preprocess.apply_stem) << '\n'
        << "#dim=" << model.weights.size() << '\n';
    for (std::size_t j = 0; j < model.weights.size(); ++j) out << j << '\t' << model.weights[j] << '\n';
    out << "bias\t" << model.bias << '\n';
  }
  {
    std::ofstream out(dir / "vocab.tsv");
    model.vocab.write(out);
  }
  if (s.features == BagKind::TfIdf) {
    std::ofstream out(dir / "idf.tsv");
    model.idf.write(out, model.vocab);
  }
}

LinearModel load_model(const std::filesystem::path& dir) {
  LinearModel m;
  std::ifstream in(dir / "model.txt");
  if (!in) throw Error("cannot open " + (dir / "model.txt").string());
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  bool saw_bias = false;
  auto flag = [&](const std::string& v) {
    if (v != "0" && v != "1") throw ParseError("bad flag '" + v + "'", lineno);
    return v == "1";
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kModelHeader) throw ParseError("unsupported model header", lineno);
      continue;
    }
    if (line.starts_with("#")) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("bad header line", lineno);
      const std::string key = line.substr(1, eq - 1);
      const std::string val = line.substr(eq + 1);
      try {
        if (key == "level") m.spec.tokenizer.level = parse_token_level(val);
        else if (key == "ngram") {
          const auto comma = val.find(',');
          m.spec.tokenizer.ngram_lo = std::stoi(val.substr(0, comma));
          m.spec.tokenizer.ngram_hi = std::stoi(val.substr(comma + 1));
        } else if (key == "oov") m.spec.oov = parse_oov_policy(val);
        else if (key == "features") m.spec.features = parse_bag_kind(val);
        else if (key == "vocab_max") m.spec.vocab_max = std::stoull(val);
        else if (key == "lowercase") m.spec.preprocess.lowercase = flag(val);
        else if (key == "strip_social") m.spec.preprocess.strip_social = flag(val);
        else if (key == "remove_stopwords") m.spec.preprocess.remove_stopwords = flag(val);
        else if (key == "apply_stem") m.spec.preprocess.apply_stem = flag(val);
        else if (key == "dim") dim = std::stoull(val);
      } catch (const std::logic_error&) {
        throw ParseError("bad value for '" + key + "'", lineno);
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("missing tab separator", lineno);
    const std::string key = line.substr(0, tab);
    double value = 0.0;
    try {
      value = std::stod(line.substr(tab + 1));
    } catch (const std::logic_error&) {
      throw ParseError("bad weight", lineno);
    }
    if (key == "bias") {
      m.bias = value;
      saw_bias = true;
      continue;
    }
    if (saw_bias) throw ParseError("weights after bias", lineno);
    if (key != std::to_string(m.weights.size())) throw ParseError("weight indices must be dense", lineno);
    m.weights.push_back(value);
  }
  if (!saw_bias) throw ParseError("missing bias line", lineno);
  if (m.weights.size() != dim) throw ParseError("weight count does not match #dim", lineno);

  std::ifstream vin(dir / "vocab.tsv");
  if (!vin) throw Error("cannot open " + (dir / "vocab.tsv").string());
  m.vocab = Vocabulary::read(vin);
  if (m.vocab.size() != m.weights.size()) throw StateError("model dimension does not match the vocabulary");
  if (m.spec.features == BagKind::TfIdf) {
    std::ifstream iin(dir / "idf.tsv");
    if (!iin) throw Error("cannot open " + (dir / "idf.tsv").string());
    m.idf = IdfTable::read(iin, m.vocab);
  }
  return m;
}

}  // namespace zew
