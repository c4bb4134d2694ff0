#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "zew/codepoints.hpp"
#include "zew/error.hpp"
#include "zew/harness.hpp"
#include "zew/utf8.hpp"

namespace zew {
namespace {

namespace fs = std::filesystem;

Corpus parse(const std::string& body, CorpusFormat f = CorpusFormat::LabeledCsv) {
  std::istringstream in(body);
  return parse_corpus(in, f, "mem");
}

int error_line(const std::string& body) {
  try {
    parse(body);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(Corpus, Lines) {
  const auto c = parse("hi\nyo\n", CorpusFormat::Lines);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_FALSE(c.labeled());
  EXPECT_EQ(c.texts(), (std::vector<std::string>{"hi", "yo"}));
  EXPECT_THROW(c.labeled_items(), DomainError);
  EXPECT_EQ(parse("a\r\n\nb", CorpusFormat::Lines).texts(), (std::vector<std::string>{"a", "b"}));
}

TEST(Corpus, LabeledCsv) {
  const auto c = parse("label,text\n1,\"I love it\"\n0,plain text\n1,\"a, \"\"quoted\"\"\nline\"\n");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_TRUE(c.labeled());
  EXPECT_EQ(c.items[0].label, Label::Positive);
  EXPECT_EQ(c.items[0].text, "I love it");
  EXPECT_EQ(c.items[1].text, "plain text");
  EXPECT_EQ(c.items[2].text, "a, \"quoted\"\nline");
}

TEST(Corpus, CsvErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("2,bad\n"), 1);
  EXPECT_EQ(error_line("1,ok\n1,\"a\nb\"\n0\n"), 4);
  EXPECT_EQ(error_line("1,ok\n1,a,b\n"), 2);
  EXPECT_EQ(error_line("1,\"never closed\n"), 1);
  EXPECT_EQ(error_line("1,\"x\"y\n"), 1);
  EXPECT_EQ(error_line("1,ok\n0,bad \xC3\x28\n"), 2);
}

TEST(Corpus, CsvRoundTrip) {
  Corpus c;
  c.items = {{"plain", Label::Negative}, {"com,ma", Label::Positive}, {"q\"uote\nnl", Label::Negative},
             {"h\u200Bate", Label::Negative}};
  std::ostringstream out;
  write_labeled_csv(out, c);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(back.items[i].text, c.items[i].text);
    EXPECT_EQ(back.items[i].label, c.items[i].label);
  }
}

TEST(Corpus, LoadReportsPath) {
  const fs::path p = fs::temp_directory_path() / ("zew_bad_" + std::to_string(::getpid()) + ".csv");
  {
    std::ofstream out(p);
    out << "1,fine\n7,nope\n";
  }
  try {
    load_corpus(p, CorpusFormat::LabeledCsv);
    ADD_FAILURE() << "expected a ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find(p.string()), std::string::npos);
  }
  fs::remove(p);
  EXPECT_THROW(load_corpus(p, CorpusFormat::Lines), Error);
}

TEST(Split, StratifiedDisjointAndDeterministic) {
  const auto corpus = generate_toy_corpus(1, 100);
  const auto a = split_corpus(corpus, 9);
  const auto b = split_corpus(corpus, 9);
  EXPECT_EQ(a.train.texts(), b.train.texts());
  EXPECT_EQ(a.test.texts(), b.test.texts());
  EXPECT_EQ(a.train.size(), 140u);
  EXPECT_EQ(a.valid.size(), 20u);
  EXPECT_EQ(a.test.size(), 40u);
  std::set<std::string> all;
  for (const auto* part : {&a.train, &a.valid, &a.test}) {
    std::size_t pos = 0;
    for (const auto& it : part->items) {
      pos += it.label == Label::Positive;
      all.insert(it.text);
    }
    EXPECT_EQ(pos * 2, part->size());
  }
  EXPECT_EQ(all.size(), corpus.size());
  EXPECT_THROW(split_corpus(corpus, 1, 0.9, 0.1), RangeError);
  EXPECT_THROW(split_corpus(parse("x\n", CorpusFormat::Lines), 1), DomainError);
}

TEST(ToyCorpus, BalancedUniqueAndSeeded) {
  const auto c = generate_toy_corpus(42);
  ASSERT_EQ(c.size(), 600u);
  std::set<std::string> texts;
  std::size_t pos = 0;
  for (const auto& it : c.items) {
    texts.insert(it.text);
    pos += it.label == Label::Positive;
    EXPECT_EQ(count_invisible(utf8::decode(it.text)), 0u);
  }
  EXPECT_EQ(texts.size(), 600u);
  EXPECT_EQ(pos, 300u);
  EXPECT_EQ(generate_toy_corpus(42).texts(), c.texts());
  EXPECT_NE(generate_toy_corpus(43).texts(), c.texts());
}

class Experiment : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto corpus = generate_toy_corpus(3, 80);
    split_ = new CorpusSplit(split_corpus(corpus, 3));
    report_ = new ExperimentReport(run_experiment(split_->train, split_->valid, split_->test, starter_lexicon(),
                                                  {.seed = 3}));
  }
  static void TearDownTestSuite() {
    delete report_;
    delete split_;
  }
  static CorpusSplit* split_;
  static ExperimentReport* report_;
};

CorpusSplit* Experiment::split_ = nullptr;
ExperimentReport* Experiment::report_ = nullptr;

TEST_F(Experiment, RunMatrixAppearsOnce) {
  std::set<std::string> labels;
  for (const auto& c : report_->configurations) labels.insert(c.report.label);
  EXPECT_EQ(labels, (std::set<std::string>{"word-unk-tfidf", "word-discard-tfidf", "char-unk-tfidf",
                                           "char-discard-tfidf"}));
}

TEST_F(Experiment, MaskCorporaAlignWithReal) {
  ASSERT_EQ(report_->mask1.size(), report_->real_size);
  ASSERT_EQ(report_->mask2.size(), report_->real_size);
  for (std::size_t i = 0; i < report_->real_size; ++i) {
    EXPECT_EQ(report_->mask1[i].original, report_->mask2[i].original);
    EXPECT_EQ(strip_invisible(std::string_view(report_->mask1[i].poisoned)), report_->mask1[i].original);
    EXPECT_EQ(strip_invisible(std::string_view(report_->mask2[i].poisoned)), report_->mask2[i].original);
    EXPECT_TRUE(report_->mask1[i].modified());
  }
}

TEST_F(Experiment, SanitizedMatchesReal) {
  ASSERT_EQ(report_->negativity.size(), 4u);
  EXPECT_EQ(report_->negativity[3].values, report_->negativity[0].values);
  EXPECT_EQ(report_->negativity[2].median, 0.0);
}

TEST_F(Experiment, CharDiscardHasNoAspDelta) {
  for (const auto& c : report_->configurations) {
    if (c.report.label != "char-discard-tfidf") continue;
    EXPECT_EQ(c.report.asp_mask1, c.report.asp_real);
    EXPECT_EQ(c.report.asp_mask2, c.report.asp_real);
  }
}

TEST_F(Experiment, ReportJsonAndTable) {
  const auto j = nlohmann::json::parse(report_json(*report_));
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["configurations"].size(), 4u);
  EXPECT_EQ(j["negativity"].size(), 4u);
  const auto table = results_csv(*report_);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
  EXPECT_EQ(report_json(*report_), report_json(run_experiment(split_->train, split_->valid, split_->test,
                                                               starter_lexicon(), {.seed = 3})));
}

TEST_F(Experiment, EmitRefusesToOverwrite) {
  const fs::path dir = fs::temp_directory_path() / ("zew_emit_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  emit_report(*report_, dir, false);
  for (const char* name : {"report.json", "results.csv", "distributions.csv", "negativity_scores.csv",
                           "poisoned.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  EXPECT_THROW(emit_report(*report_, dir, false), Error);
  EXPECT_NO_THROW(emit_report(*report_, dir, true));
  fs::remove_all(dir);
}

TEST(ExperimentErrors, StageContext) {
  Corpus tiny;
  tiny.items = {{"I love it", Label::Positive}, {"nice day", Label::Negative}};
  try {
    run_experiment(tiny, tiny, tiny, starter_lexicon(), {});
    ADD_FAILURE() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("stage 'poison'"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace zew
