#include "zew/attack.hpp"

#include "json.hpp"

#include "zew/codepoints.hpp"
#include "zew/error.hpp"
#include "zew/text.hpp"
#include "zew/utf8.hpp"

namespace zew {

std::string_view to_string(MaskKind mask) noexcept {
  return mask == MaskKind::Mask1 ? "mask1" : "mask2";
}

MaskKind parse_mask(std::string_view name) {
  if (name == "mask1" || name == "1") return MaskKind::Mask1;
  if (name == "mask2" || name == "2") return MaskKind::Mask2;
  throw DomainError("unknown mask '" + std::string(name) + "'");
}

char32_t InvisibleSource::next() {
  const auto& set = zero_width_set();
  const std::uint64_t draw = rng_();
  if (alphabet_ == InjectionAlphabet::SpaceOnly) return 0x200B;
  return set[draw % set.size()];
}

std::u32string inject_word(std::u32string_view word, MaskKind mask, InvisibleSource& source) {
  if (word.empty()) throw DomainError("cannot inject into an empty word");
  if (count_invisible(word) != 0) throw DomainError("word already contains invisible codepoints");

  std::u32string out;
  if (mask == MaskKind::Mask1) {
    const std::size_t at = word.size() / 2;
    out.reserve(word.size() + 1);
    out.append(word.substr(0, at));
    out.push_back(source.next());
    out.append(word.substr(at));
  } else {
    out.reserve(2 * word.size() + 1);
    for (char32_t cp : word) {
      out.push_back(source.next());
      out.push_back(cp);
    }
    out.push_back(source.next());
  }
  return out;
}

std::string inject_word(std::string_view word, MaskKind mask, InvisibleSource& source) {
  return utf8::encode(inject_word(utf8::decode(word), mask, source));
}

ManipulationRecord manipulate(std::string_view sentence, MaskKind mask, const SentimentLexicon& lex,
                              std::uint64_t seed, InjectionAlphabet alphabet) {
  const std::u32string s = utf8::decode(sentence);
  if (count_invisible(s) != 0) throw DomainError("sentence already contains invisible codepoints");

  ManipulationRecord rec;
  rec.original = std::string(sentence);
  rec.mask = mask;
  rec.seed = seed;

  InvisibleSource source(seed, alphabet);
  std::u32string poisoned;
  poisoned.reserve(s.size() + 16);
  std::size_t copied = 0;
  const auto spans = text::token_spans(s);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& t = spans[i];
    if (!t.has_core()) continue;
    const std::u32string_view core(s.data() + t.core_begin, t.core_end - t.core_begin);
    if (!word_is_negative(core, lex)) continue;
    const std::u32string injected = inject_word(core, mask, source);
    poisoned.append(s, copied, t.core_begin - copied);
    poisoned.append(injected);
    copied = t.core_end;
    rec.targets.push_back({i, utf8::encode(core), utf8::encode(injected)});
  }
  if (rec.targets.empty()) {
    rec.poisoned = rec.original;
  } else {
    poisoned.append(s, copied);
    rec.poisoned = utf8::encode(poisoned);
  }
  return rec;
}

std::vector<std::string> PoisonedCorpus::texts() const {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.poisoned);
  return out;
}

PoisonedCorpus poison_corpus(std::span<const std::string> corpus, MaskKind mask,
                             const SentimentLexicon& lex, std::uint64_t seed,
                             const PoisonOptions& options) {
  PoisonedCorpus out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ManipulationRecord rec;
    try {
      rec = manipulate(corpus[i], mask, lex, seed + i, options.alphabet);
    } catch (const ParseError& e) {
      throw ParseError::with_context("sentence " + std::to_string(i), e);
    } catch (const DomainError& e) {
      throw DomainError("sentence " + std::to_string(i) + ": " + e.what());
    }
    if (rec.modified()) {
      ++out.stats.modified;
    } else {
      ++out.stats.unmodified;
      if (options.discard_unmodified) {
        ++out.stats.discarded;
        continue;
      }
    }
    out.records.push_back(std::move(rec));
    out.source_index.push_back(i);
  }
  return out;
}

std::string to_json_line(const ManipulationRecord& record) {
  nlohmann::ordered_json j;
  j["original"] = record.original;
  j["poisoned"] = record.poisoned;
  j["mask"] = to_string(record.mask);
  auto& targets = j["targets"] = nlohmann::ordered_json::array();
  for (const auto& t : record.targets) {
    targets.push_back({{"index", t.token_index}, {"original", t.original}, {"poisoned", t.poisoned}});
  }
  j["seed"] = record.seed;
  return j.dump();
}

}  // namespace zew
