#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "test_support.hpp"
#include "zew/attack.hpp"
#include "zew/codepoints.hpp"
#include "zew/error.hpp"
#include "zew/utf8.hpp"

namespace zew {
namespace {

SentimentLexicon hate_only() {
  std::istringstream in("hate\t-0.8\n");
  return load_lexicon(in);
}

TEST(InjectWord, Mask1InsertsOneInTheMiddle) {
  InvisibleSource src(1);
  const auto out = inject_word(std::u32string_view(U"hate"), MaskKind::Mask1, src);
  ASSERT_EQ(out.size(), 5u);
  EXPECT_EQ(out.substr(0, 2), U"ha");
  EXPECT_TRUE(is_invisible(out[2]));
  EXPECT_EQ(out.substr(3), U"te");
}

TEST(InjectWord, Mask2SurroundsEveryCodepoint) {
  InvisibleSource src(1);
  const auto out = inject_word(std::u32string_view(U"hate"), MaskKind::Mask2, src);
  ASSERT_EQ(out.size(), 9u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(is_invisible(out[i]), i % 2 == 0) << i;
  }
  EXPECT_EQ(strip_invisible(out), U"hate");
}

TEST(InjectWord, SingleCodepointMask1InsertsAtFront) {
  InvisibleSource src(3);
  const auto out = inject_word(std::u32string_view(U"a"), MaskKind::Mask1, src);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(is_invisible(out[0]));
  EXPECT_EQ(out[1], U'a');
}

TEST(InjectWord, Errors) {
  InvisibleSource src(0);
  EXPECT_THROW(inject_word(std::u32string_view(U""), MaskKind::Mask1, src), DomainError);
  EXPECT_THROW(inject_word(std::u32string_view(U"ha\u200Bte"), MaskKind::Mask2, src), DomainError);
}

TEST(InjectWord, SpaceOnlyAlphabet) {
  InvisibleSource src(9, InjectionAlphabet::SpaceOnly);
  const auto out = inject_word(std::u32string_view(U"hate"), MaskKind::Mask2, src);
  for (std::size_t i = 0; i < out.size(); i += 2) EXPECT_EQ(out[i], 0x200Bu);
}

TEST(InjectWord, DrawsAcrossTheWholeSet) {
  InvisibleSource src(5);
  std::set<char32_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(src.next());
  EXPECT_EQ(seen.size(), zero_width_set().size());
}

TEST(Manipulate, AlbumSentenceMask1) {
  const auto rec = manipulate("I hate this album", MaskKind::Mask1, hate_only(), 0);
  ASSERT_EQ(rec.targets.size(), 1u);
  EXPECT_EQ(rec.targets[0].token_index, 1u);
  EXPECT_EQ(rec.targets[0].original, "hate");
  const auto poisoned_word = utf8::decode(rec.targets[0].poisoned);
  ASSERT_EQ(poisoned_word.size(), 5u);
  EXPECT_TRUE(is_invisible(poisoned_word[2]));
  EXPECT_EQ(rec.poisoned, "I " + rec.targets[0].poisoned + " this album");
  EXPECT_EQ(strip_invisible(std::string_view(rec.poisoned)), rec.original);
}

TEST(Manipulate, NoNegativeWordsLeavesSentenceUntouched) {
  const auto rec = manipulate("this album", MaskKind::Mask1, hate_only(), 0);
  EXPECT_TRUE(rec.targets.empty());
  EXPECT_EQ(rec.poisoned, "this album");
}

TEST(Manipulate, RepeatedTargetsAndRoundTrip) {
  const auto rec = manipulate("I hate hate", MaskKind::Mask2, hate_only(), 7);
  ASSERT_EQ(rec.targets.size(), 2u);
  EXPECT_EQ(rec.targets[0].token_index, 1u);
  EXPECT_EQ(rec.targets[1].token_index, 2u);
  EXPECT_EQ(strip_invisible(std::string_view(rec.poisoned)), "I hate hate");
  EXPECT_EQ(count_invisible(utf8::decode(rec.poisoned)), 10u);
}

TEST(Manipulate, PunctuationAndSpacingPreserved) {
  const auto rec = manipulate("  \"HATE!!\"\tyou,  (hate)  ", MaskKind::Mask1, hate_only(), 3);
  ASSERT_EQ(rec.targets.size(), 2u);
  EXPECT_EQ(rec.targets[0].original, "HATE");
  EXPECT_EQ(rec.targets[1].original, "hate");
  EXPECT_EQ(strip_invisible(std::string_view(rec.poisoned)), rec.original);
  EXPECT_TRUE(rec.poisoned.starts_with("  \"HA"));
  EXPECT_TRUE(rec.poisoned.ends_with("te)  "));
}

TEST(Manipulate, RejectsAlreadyPoisonedInput) {
  EXPECT_THROW(manipulate("I ha\u200Bte it", MaskKind::Mask1, hate_only(), 0), DomainError);
}

TEST(Manipulate, Properties) {
  const auto& lex = starter_lexicon();
  testing::SentenceGenerator gen(2024);
  for (int i = 0; i < 3000; ++i) {
    const std::string s = gen.next();
    for (MaskKind mask : {MaskKind::Mask1, MaskKind::Mask2}) {
      const auto rec = manipulate(s, mask, lex, static_cast<std::uint64_t>(i));
      ASSERT_EQ(strip_invisible(std::string_view(rec.poisoned)), s);
      EXPECT_EQ(rec.targets.empty(), rec.poisoned == s);
      std::size_t expected = 0;
      for (const auto& t : rec.targets) {
        EXPECT_EQ(strip_invisible(std::string_view(t.poisoned)), t.original);
        const std::size_t n = utf8::length(t.original);
        expected += mask == MaskKind::Mask1 ? 1 : n + 1;
      }
      EXPECT_EQ(count_invisible(utf8::decode(rec.poisoned)), expected);
      EXPECT_EQ(manipulate(s, mask, lex, static_cast<std::uint64_t>(i)), rec);
    }
  }
}

TEST(PoisonCorpus, DiscardsUnmodifiedSentences) {
  const std::vector<std::string> corpus = {"this album", "I hate this album", "nice day"};
  const auto out = poison_corpus(corpus, MaskKind::Mask1, hate_only(), 10);
  ASSERT_EQ(out.records.size(), 1u);
  EXPECT_EQ(out.source_index, std::vector<std::size_t>{1});
  EXPECT_EQ(out.stats, (PoisonStats{1, 2, 2}));
  EXPECT_EQ(out.records[0].seed, 11u);

  const auto kept = poison_corpus(corpus, MaskKind::Mask1, hate_only(), 10, {.discard_unmodified = false});
  EXPECT_EQ(kept.records.size(), 3u);
  EXPECT_EQ(kept.stats, (PoisonStats{1, 2, 0}));
}

TEST(PoisonCorpus, EmptyAndDeterministic) {
  const auto empty = poison_corpus({}, MaskKind::Mask2, hate_only(), 1);
  EXPECT_TRUE(empty.records.empty());
  EXPECT_EQ(empty.stats, PoisonStats{});

  const std::vector<std::string> corpus = {"hate it", "I hate hate", "ok"};
  const auto a = poison_corpus(corpus, MaskKind::Mask2, hate_only(), 99);
  const auto b = poison_corpus(corpus, MaskKind::Mask2, hate_only(), 99);
  EXPECT_EQ(a.texts(), b.texts());
}

TEST(PoisonCorpus, ErrorsNameTheSentence) {
  const std::vector<std::string> corpus = {"fine", "bad\u200B one"};
  try {
    poison_corpus(corpus, MaskKind::Mask1, hate_only(), 0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("sentence 1"), std::string::npos);
  }
}

TEST(ManipulationRecord, SerializesToJson) {
  const auto rec = manipulate("I hate this album", MaskKind::Mask2, hate_only(), 4);
  const auto j = nlohmann::json::parse(to_json_line(rec));
  EXPECT_EQ(j["original"], "I hate this album");
  EXPECT_EQ(j["poisoned"], rec.poisoned);
  EXPECT_EQ(j["mask"], "mask2");
  EXPECT_EQ(j["seed"], 4);
  ASSERT_EQ(j["targets"].size(), 1u);
  EXPECT_EQ(j["targets"][0]["index"], 1);
}

}  // namespace
}  // namespace zew
