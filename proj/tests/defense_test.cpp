#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"
#include "zew/attack.hpp"
#include "zew/codepoints.hpp"
#include "zew/defense.hpp"
#include "zew/error.hpp"

namespace zew {
namespace {

TEST(Detect, Examples) {
  EXPECT_EQ(detect(std::string_view("hate")), DetectionReport{});
  const auto r = detect(std::string_view("ha\u200Bte"));
  EXPECT_TRUE(r.flagged);
  ASSERT_EQ(r.hits.size(), 1u);
  EXPECT_EQ(r.hits[0], (DetectionHit{2, 0x200B}));
}

TEST(Detect, HitsAreOrderedAndValid) {
  const auto r = detect(std::u32string_view(U"\u200Da\u2060b\uFEFF\uFEFF"));
  ASSERT_EQ(r.hits.size(), 4u);
  for (std::size_t i = 1; i < r.hits.size(); ++i) EXPECT_LT(r.hits[i - 1].index, r.hits[i].index);
  for (const auto& h : r.hits) EXPECT_TRUE(is_invisible(h.codepoint));
}

TEST(Detect, LegitimateUnicodeIsNotFlagged) {
  EXPECT_FALSE(detect(std::string_view("emoji 😀 café 日本語   Привет")).flagged);
}

TEST(Detect, CatchesEveryMask2Poisoning) {
  const auto& lex = starter_lexicon();
  testing::SentenceGenerator gen(5);
  for (int i = 0; i < 1000; ++i) {
    const std::string s = gen.next();
    EXPECT_FALSE(detect(std::string_view(s)).flagged);
    const auto rec = manipulate(s, MaskKind::Mask2, lex, 1);
    if (rec.modified()) EXPECT_GE(detect(std::string_view(rec.poisoned)).hits.size(), 2u);
  }
}

TEST(Guard, Policies) {
  EXPECT_EQ(std::get<std::string>(guard("hate", GuardPolicy::Reject)), "hate");
  const auto rejected = guard("ha\u200Bte", GuardPolicy::Reject);
  ASSERT_TRUE(is_rejected(rejected));
  EXPECT_EQ(std::get<Rejection>(rejected).report.hits.size(), 1u);
  EXPECT_EQ(std::get<std::string>(guard("ha\u200Bte", GuardPolicy::Strip)), "hate");
  EXPECT_EQ(parse_guard_policy("strip"), GuardPolicy::Strip);
  EXPECT_THROW(parse_guard_policy("block"), DomainError);
}

TEST(Guard, StripUndoesManipulation) {
  const auto& lex = starter_lexicon();
  testing::SentenceGenerator gen(8);
  for (int i = 0; i < 500; ++i) {
    const std::string s = gen.next();
    const auto rec = manipulate(s, MaskKind::Mask1, lex, static_cast<std::uint64_t>(i));
    EXPECT_EQ(std::get<std::string>(guard(rec.poisoned, GuardPolicy::Strip)), s);
  }
}

TEST(DiscrepancyProbe, CleanTextNeverDiverges) {
  const TextScore length = [](std::string_view t) { return static_cast<double>(t.size()); };
  EXPECT_FALSE(discrepancy_probe(length, "I hate this album", 0.0));
  EXPECT_TRUE(discrepancy_probe(length, "I ha\u200Bte this album", 0.0));
  EXPECT_FALSE(discrepancy_probe(length, "I ha\u200Bte this album", 3.0));
  EXPECT_THROW(discrepancy_probe(length, "x", -1.0), RangeError);
}

TEST(DiscrepancyProbe, LexiconNegativityExposesTheAttack) {
  const auto& lex = starter_lexicon();
  const TextScore negativity = [&](std::string_view t) { return sentence_negativity(t, lex); };
  const auto rec = manipulate("I hate this album", MaskKind::Mask1, lex, 0);
  EXPECT_TRUE(discrepancy_probe(negativity, rec.poisoned, 0.0));
}

TEST(DetectionReport, Json) {
  EXPECT_EQ(to_json_line(detect(std::string_view("ha\u200Bte"))),
            R"({"flagged":true,"hits":[{"index":2,"codepoint":"U+200B"}]})");
}

}  // namespace
}  // namespace zew
