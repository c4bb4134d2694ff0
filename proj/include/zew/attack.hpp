#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zew/lexicon.hpp"

namespace zew {

// Mask1: one invisible codepoint in the middle of the word (hate -> ha$te).
// Mask2: one before, between and after every codepoint ($h$a$t$e$).
enum class MaskKind { Mask1, Mask2 };

std::string_view to_string(MaskKind mask) noexcept;
MaskKind parse_mask(std::string_view name);

// Which codepoints the injector may draw from.
enum class InjectionAlphabet { FullSet, SpaceOnly };

// Seeded source of invisible codepoints. mt19937_64 is fully specified by the
// standard, and draws use a plain modulo, so sequences are identical on every
// platform.
class InvisibleSource {
 public:
  explicit InvisibleSource(std::uint64_t seed, InjectionAlphabet alphabet = InjectionAlphabet::FullSet)
      : rng_(seed), alphabet_(alphabet) {}

  char32_t next();

 private:
  std::mt19937_64 rng_;
  InjectionAlphabet alphabet_;
};

struct InjectionTarget {
  std::size_t token_index;  // among whitespace-delimited tokens
  std::string original;
  std::string poisoned;

  bool operator==(const InjectionTarget&) const = default;
};

// One sentence run through the manipulation. strip_invisible(poisoned) == original.
struct ManipulationRecord {
  std::string original;
  std::string poisoned;
  MaskKind mask = MaskKind::Mask1;
  std::vector<InjectionTarget> targets;
  std::uint64_t seed = 0;

  bool modified() const noexcept { return !targets.empty(); }
  bool operator==(const ManipulationRecord&) const = default;
};

// Throws DomainError for an empty word or a word that already carries
// invisible codepoints.
std::u32string inject_word(std::u32string_view word, MaskKind mask, InvisibleSource& source);
std::string inject_word(std::string_view word, MaskKind mask, InvisibleSource& source);

// Injects into every token whose stem is negative in `lex`. Substitution is
// done in place on the token core (leading/trailing ASCII punctuation kept
// outside), so every other byte of the sentence is preserved.
ManipulationRecord manipulate(std::string_view sentence, MaskKind mask, const SentimentLexicon& lex,
                              std::uint64_t seed,
                              InjectionAlphabet alphabet = InjectionAlphabet::FullSet);

struct PoisonOptions {
  bool discard_unmodified = true;
  InjectionAlphabet alphabet = InjectionAlphabet::FullSet;
};

struct PoisonStats {
  std::size_t modified = 0;
  std::size_t unmodified = 0;
  std::size_t discarded = 0;

  bool operator==(const PoisonStats&) const = default;
};

struct PoisonedCorpus {
  std::vector<ManipulationRecord> records;
  std::vector<std::size_t> source_index;  // position of each record in the input
  PoisonStats stats;

  std::vector<std::string> texts() const;
};

// Sentence i is manipulated with seed + i.
PoisonedCorpus poison_corpus(std::span<const std::string> corpus, MaskKind mask,
                             const SentimentLexicon& lex, std::uint64_t seed,
                             const PoisonOptions& options = {});

// Single-line JSON object: original, poisoned, mask, targets, seed.
std::string to_json_line(const ManipulationRecord& record);

}  // namespace zew
