#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "zew/attack.hpp"
#include "zew/codepoints.hpp"
#include "zew/error.hpp"
#include "zew/lexicon.hpp"
#include "zew/pipeline.hpp"
#include "zew/utf8.hpp"

namespace zew {
namespace {

using V = std::vector<std::string>;

std::vector<std::string> render(const std::vector<TokenId>& ids, const Vocabulary& vocab) {
  std::vector<std::string> out;
  for (auto id : ids) out.push_back(vocab.token_of(id));
  return out;
}

TEST(Preprocess, StripSocial) {
  const PreprocessConfig cfg{.strip_social = true};
  EXPECT_EQ(preprocess("@user I hate this http://x.y #tag", cfg), "I hate this");
  EXPECT_EQ(preprocess("see https://a.b/c?d=e  now", cfg), "see now");
  EXPECT_EQ(preprocess("# alone and @ too", cfg), "# alone and @ too");
  EXPECT_EQ(preprocess("#ha\u200Bte rocks", cfg), "rocks");
  EXPECT_EQ(preprocess("", cfg), "");
}

TEST(Preprocess, LowercaseAndOrder) {
  EXPECT_EQ(preprocess("HATE", {.lowercase = true}), "hate");
  EXPECT_EQ(preprocess("ÀÉÎ ΑΘΗ ПРИВЕТ", {.lowercase = true}), "àéî αθη привет");
  EXPECT_EQ(preprocess("@User HATE #Tag", {.lowercase = true, .strip_social = true}), "hate");
  EXPECT_EQ(preprocess("keep  #spacing", {}), "keep  #spacing");
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("hello there", {TokenLevel::Word, 1, 1}), (V{"hello", "there"}));
  EXPECT_EQ(tokenize("hate", {TokenLevel::Char, 1, 1}), (V{"h", "a", "t", "e"}));
  EXPECT_EQ(tokenize("ab", {TokenLevel::Char, 1, 2}), (V{"a", "b", "ab"}));
}

TEST(Tokenize, WordNgramsAndPunctuation) {
  EXPECT_EQ(tokenize("I hate, this!", {TokenLevel::Word, 1, 1}), (V{"I", "hate", ",", "this", "!"}));
  EXPECT_EQ(tokenize("a b c", {TokenLevel::Word, 2, 3}), (V{"a b", "b c", "a b c"}));
  EXPECT_EQ(tokenize("a b", {TokenLevel::Word, 3, 3}), V{});
  EXPECT_EQ(tokenize("a b", {TokenLevel::Char, 1, 1}), (V{"a", " ", "b"}));
  EXPECT_THROW(tokenize("x", {TokenLevel::Word, 2, 1}), RangeError);
  EXPECT_THROW(tokenize("x", {TokenLevel::Word, 0, 1}), RangeError);
}

TEST(Tokenize, InvisibleCodepointsStayInsideWords) {
  EXPECT_EQ(tokenize("I h\u200Ba\u200Bt\u200Be this", {TokenLevel::Word, 1, 1}),
            (V{"I", "h\u200Ba\u200Bt\u200Be", "this"}));
}

TEST(Analyze, StopwordsAndStemming) {
  const PreprocessConfig cfg{.lowercase = true, .remove_stopwords = true, .apply_stem = true};
  EXPECT_EQ(analyze("The books were killed", cfg, {TokenLevel::Word, 1, 1}), (V{"book", "kill"}));
  // Word-level transforms do not touch char tokenization.
  EXPECT_EQ(analyze("The", cfg, {TokenLevel::Char, 1, 1}), (V{"t", "h", "e"}));
}

TEST(BuildVocab, FrequencyCapAndSpecials) {
  const std::vector<Tokens> corpus = {{"a", "b", "a"}};
  const auto v = build_vocab(corpus, 1, OovPolicy::map_to_unk());
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.find("a"), TokenId{0});
  EXPECT_FALSE(v.find("b"));
  EXPECT_EQ(v.unk_id(), TokenId{1});
  EXPECT_EQ(v.token_of(1), "UNK");

  const auto d = build_vocab(corpus, 5, OovPolicy::discard());
  EXPECT_FALSE(d.unk_id());
  EXPECT_EQ(d.size(), 2u);

  const std::vector<Tokens> tie = {{"y", "x"}};
  const auto t = build_vocab(tie, 1, OovPolicy::discard());
  EXPECT_TRUE(t.find("x"));
  EXPECT_FALSE(t.find("y"));
}

TEST(BuildVocab, Errors) {
  EXPECT_THROW(build_vocab(std::vector<Tokens>{}, 10, OovPolicy::discard()), DomainError);
  EXPECT_THROW(build_vocab(std::vector<Tokens>{{}}, 10, OovPolicy::discard()), DomainError);
  EXPECT_THROW(build_vocab(std::vector<Tokens>{{"a"}}, 0, OovPolicy::discard()), RangeError);
}

TEST(Index, WordLevelPolicies) {
  const std::vector<Tokens> train = {{"I", "hate", "this", "album"}};
  const V poisoned = {"I", "h\u200Ba\u200Bt\u200Be", "this", "album"};

  const auto unk = build_vocab(train, 100, OovPolicy::map_to_unk());
  EXPECT_EQ(render(index(poisoned, unk, OovPolicy::map_to_unk()), unk), (V{"I", "UNK", "this", "album"}));

  const auto dis = build_vocab(train, 100, OovPolicy::discard());
  EXPECT_EQ(render(index(poisoned, dis, OovPolicy::discard()), dis), (V{"I", "this", "album"}));
}

TEST(Index, CharLevelUnk) {
  const std::vector<Tokens> train = {tokenize("hate", {TokenLevel::Char, 1, 1})};
  const auto vocab = build_vocab(train, 100, OovPolicy::map_to_unk());
  const auto toks = tokenize("h\u200Ba\u200Bt\u200Be", {TokenLevel::Char, 1, 1});
  EXPECT_EQ(render(index(toks, vocab, OovPolicy::map_to_unk()), vocab),
            (V{"h", "UNK", "a", "UNK", "t", "UNK", "e"}));
}

TEST(Index, Placeholders) {
  const std::vector<Tokens> train = {{"meets"}};
  const auto policy = OovPolicy::placeholder(2);
  const auto vocab = build_vocab(train, 10, policy);
  EXPECT_EQ(render(index(V{"Liam", "meets", "Noel"}, vocab, policy), vocab), (V{"UNK1", "meets", "UNK2"}));
  // Same word keeps its placeholder; overflow wraps modulo k.
  EXPECT_EQ(render(index(V{"Liam", "Noel", "Liam", "Oasis"}, vocab, policy), vocab),
            (V{"UNK1", "UNK2", "UNK1", "UNK1"}));
}

TEST(Index, IncompatiblePolicy) {
  const auto vocab = build_vocab(std::vector<Tokens>{{"a"}}, 10, OovPolicy::discard());
  EXPECT_THROW(index(V{"b"}, vocab, OovPolicy::map_to_unk()), StateError);
  EXPECT_THROW(index(V{"b"}, vocab, OovPolicy::placeholder(1)), StateError);
}

TEST(Encode, CountAndOneHot) {
  const std::vector<Tokens> train = {{"hello", "there", "hello"}};
  const auto vocab = build_vocab(train, 2, OovPolicy::discard());
  ASSERT_EQ(vocab.token_of(0), "hello");
  ASSERT_EQ(vocab.token_of(1), "there");
  const auto s1 = index(tokenize("hello there", {}), vocab, OovPolicy::discard());
  const auto s2 = index(tokenize("hello hello", {}), vocab, OovPolicy::discard());
  EXPECT_EQ(encode_count(s1, vocab), (DenseVector{1, 1}));
  EXPECT_EQ(encode_count(s2, vocab), (DenseVector{2, 0}));
  EXPECT_EQ(encode_onehot(s1, vocab), (std::vector<DenseVector>{{1, 0}, {0, 1}}));
  EXPECT_EQ(encode_onehot(s2, vocab), (std::vector<DenseVector>{{1, 0}, {1, 0}}));
  EXPECT_EQ(encode_count(std::vector<TokenId>{}, vocab), (DenseVector{0, 0}));
}

TEST(Encode, TfIdfMatchesHandComputation) {
  const std::vector<std::vector<TokenId>> docs = {{0, 1}, {0, 0}, {2}};
  const auto idf = IdfTable::fit(docs, 3);
  // N = 3; df = {2, 1, 1}
  const double idf0 = std::log(4.0 / 3.0) + 1.0;
  const double idf1 = std::log(4.0 / 2.0) + 1.0;
  EXPECT_DOUBLE_EQ(idf.idf(0), idf0);
  EXPECT_DOUBLE_EQ(idf.idf(1), idf1);

  const std::vector<TokenId> doc = {0, 0, 1};
  const auto v = bag_of_tokens(doc, 3, BagKind::TfIdf, &idf).to_dense(3);
  const double a = 2 * idf0, b = idf1, norm = std::sqrt(a * a + b * b);
  EXPECT_NEAR(v[0], a / norm, 1e-15);
  EXPECT_NEAR(v[1], b / norm, 1e-15);
  EXPECT_EQ(v[2], 0.0);
}

TEST(Encode, TfIdfRequiresFittedStatistics) {
  const auto vocab = build_vocab(std::vector<Tokens>{{"a"}}, 10, OovPolicy::discard());
  IdfTable unfitted;
  EXPECT_THROW(encode_tfidf(std::vector<TokenId>{0}, vocab, unfitted), StateError);
  EXPECT_THROW(encode(std::vector<TokenId>{0}, vocab, {.kind = EncodeKind::TfIdf}), StateError);
}

TEST(Encode, DenseTableIsSeededAndBounded) {
  const auto vocab = build_vocab(std::vector<Tokens>{{"a", "b", "c"}}, 10, OovPolicy::map_to_unk());
  const std::vector<TokenId> ids = {0, 3, 0};
  const EncodeOptions opts{.kind = EncodeKind::Dense, .dense_dim = 5, .dense_seed = 7};
  const auto rows = encode(ids, vocab, opts);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], rows[2]);
  EXPECT_NE(rows[0], rows[1]);
  for (const auto& r : rows) {
    ASSERT_EQ(r.size(), 5u);
    for (double x : r) {
      EXPECT_GE(x, -0.1);
      EXPECT_LE(x, 0.1);
    }
  }
  EXPECT_EQ(encode(ids, vocab, opts), rows);
}

TEST(Vocabulary, FileRoundTrip) {
  const std::vector<Tokens> corpus = {tokenize("a\tb c\\d", {TokenLevel::Char, 1, 2})};
  for (const auto& policy : {OovPolicy::map_to_unk(), OovPolicy::discard(), OovPolicy::placeholder(3)}) {
    const auto vocab = build_vocab(corpus, 6, policy);
    std::stringstream buf;
    vocab.write(buf);
    const auto back = Vocabulary::read(buf);
    ASSERT_EQ(back.size(), vocab.size());
    EXPECT_EQ(back.policy(), policy);
    for (TokenId id = 0; id < vocab.size(); ++id) EXPECT_EQ(back.token_of(id), vocab.token_of(id));
    for (const auto& tok : corpus[0]) EXPECT_EQ(back.find(tok), vocab.find(tok));

    const auto ids = index(corpus[0], vocab, policy);
    const auto idf = IdfTable::fit(std::vector<std::vector<TokenId>>{ids}, vocab.size());
    std::stringstream ibuf;
    idf.write(ibuf, vocab);
    const auto idf_back = IdfTable::read(ibuf, back);
    for (TokenId id = 0; id < vocab.size(); ++id) EXPECT_EQ(idf_back.idf(id), idf.idf(id));
  }
}

TEST(PipelineInvariants, CharUnigramDiscardIgnoresTheAttack) {
  const auto& lex = starter_lexicon();
  testing::SentenceGenerator gen(77);
  std::vector<std::string> clean;
  for (int i = 0; i < 300; ++i) clean.push_back(gen.next());
  const TokenizerSpec spec{TokenLevel::Char, 1, 1};
  std::vector<Tokens> train;
  for (const auto& s : clean) train.push_back(tokenize(s, spec));
  const auto vocab = build_vocab(train, 100000, OovPolicy::discard());

  for (std::size_t i = 0; i < clean.size(); ++i) {
    for (MaskKind mask : {MaskKind::Mask1, MaskKind::Mask2}) {
      const auto rec = manipulate(clean[i], mask, lex, i);
      EXPECT_EQ(index(tokenize(rec.poisoned, spec), vocab, OovPolicy::discard()),
                index(tokenize(clean[i], spec), vocab, OovPolicy::discard()));
    }
  }
}

TEST(PipelineInvariants, CharUnigramUnkAddsOneUnkPerInjection) {
  const auto& lex = starter_lexicon();
  testing::SentenceGenerator gen(78);
  const TokenizerSpec spec{TokenLevel::Char, 1, 1};
  std::vector<std::string> clean;
  std::vector<Tokens> train;
  for (int i = 0; i < 300; ++i) {
    clean.push_back(gen.next());
    train.push_back(tokenize(clean.back(), spec));
  }
  const auto vocab = build_vocab(train, 100000, OovPolicy::map_to_unk());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const auto rec = manipulate(clean[i], MaskKind::Mask2, lex, i);
    const auto clean_ids = index(tokenize(clean[i], spec), vocab, OovPolicy::map_to_unk());
    const auto ids = index(tokenize(rec.poisoned, spec), vocab, OovPolicy::map_to_unk());
    const auto injected = count_invisible(utf8::decode(rec.poisoned));
    ASSERT_EQ(ids.size(), clean_ids.size() + injected);
    std::vector<TokenId> without_unk;
    for (auto id : ids) {
      if (id != *vocab.unk_id()) without_unk.push_back(id);
    }
    EXPECT_EQ(without_unk, clean_ids);
  }
}

TEST(PipelineInvariants, TargetedWordsAreAlwaysOov) {
  const auto& lex = starter_lexicon();
  testing::SentenceGenerator gen(79);
  std::vector<std::string> clean;
  std::vector<Tokens> train;
  for (int i = 0; i < 300; ++i) {
    clean.push_back(gen.next());
    train.push_back(tokenize(clean.back(), {}));
  }
  const auto vocab = build_vocab(train, 100000, OovPolicy::map_to_unk());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const auto rec = manipulate(clean[i], MaskKind::Mask1, lex, i);
    for (const auto& t : rec.targets) EXPECT_FALSE(vocab.find(t.poisoned));
  }
}

TEST(PipelineInvariants, IdfIsFitOnTrainingOnly) {
  const std::vector<std::vector<TokenId>> docs = {{0, 1}, {1, 2}};
  const auto idf = IdfTable::fit(docs, 4);
  const std::vector<TokenId> clean = {0, 1};
  const auto before = bag_of_tokens(clean, 4, BagKind::TfIdf, &idf).entries;
  // Encoding poisoned sentences elsewhere does not alter the fitted table.
  bag_of_tokens(std::vector<TokenId>{3, 3, 3}, 4, BagKind::TfIdf, &idf);
  EXPECT_EQ(bag_of_tokens(clean, 4, BagKind::TfIdf, &idf).entries, before);
}

}  // namespace
}  // namespace zew
