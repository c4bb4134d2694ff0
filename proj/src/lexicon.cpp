#include "zew/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "zew/codepoints.hpp"
#include "zew/error.hpp"
#include "zew/text.hpp"
#include "zew/utf8.hpp"

namespace zew {

namespace {

constexpr std::string_view kStarterLexicon =
    "hate\t-0.8\nkill\t-0.9\nawful\t-0.75\nterrible\t-0.8\nhorrible\t-0.8\n"
    "bad\t-0.6\nworst\t-0.85\nugly\t-0.6\nstupid\t-0.7\nidiot\t-0.75\n"
    "disgust\t-0.75\nnasty\t-0.65\nevil\t-0.8\nangry\t-0.6\nsad\t-0.55\npain\t-0.6\n"
    "hurt\t-0.6\ncruel\t-0.75\nrude\t-0.6\nfail\t-0.55\nbroken\t-0.5\nruin\t-0.65\n"
    "trash\t-0.6\ngarbage\t-0.6\npoor\t-0.45\nlame\t-0.5\nannoy\t-0.5\nwaste\t-0.55\n"
    "sick\t-0.5\ndumb\t-0.6\nhateful\t-0.85\nhorrid\t-0.8\nvile\t-0.8\ntoxic\t-0.65\n"
    "pathetic\t-0.7\ndisaster\t-0.7\nfear\t-0.55\nafraid\t-0.5\ncry\t-0.45\n"
    "die\t-0.7\ndeath\t-0.75\ndead\t-0.65\nmurder\t-0.9\nabuse\t-0.8\nattack\t-0.55\n"
    "destroy\t-0.7\ndamn\t-0.5\nhell\t-0.55\ncrap\t-0.6\nsuck\t-0.6\nloser\t-0.65\n"
    "liar\t-0.7\nfake\t-0.5\nfraud\t-0.7\nshame\t-0.6\nguilt\t-0.5\nhostile\t-0.6\n"
    "violent\t-0.75\nbrutal\t-0.7\ninsult\t-0.65\noffend\t-0.55\nmock\t-0.45\n"
    "blame\t-0.5\nbetray\t-0.75\ncheat\t-0.6\nsteal\t-0.6\nlie\t-0.5\n"
    "miserable\t-0.75\nawkward\t-0.35\ndull\t-0.4\nbland\t-0.35\nmediocre\t-0.4\n"
    "inferior\t-0.45\nunfair\t-0.55\nunhappy\t-0.6\nupset\t-0.5\nworry\t-0.4\n"
    "anxiety\t-0.5\ntense\t-0.35\npanic\t-0.55\nregret\t-0.55\ngrief\t-0.65\n"
    "sorrow\t-0.6\ndespair\t-0.75\nagony\t-0.75\ntorture\t-0.85\nthreat\t-0.6\n"
    "enemy\t-0.55\nwar\t-0.6\nracist\t-0.85\nbigot\t-0.8\nscum\t-0.85\nfilth\t-0.7\n"
    "freak\t-0.55\nmoron\t-0.75\npig\t-0.45\nrat\t-0.4\ncoward\t-0.6\nweak\t-0.4\n"
    "rotten\t-0.65\ndisappoint\t-0.6\nfrustrate\t-0.55\nhorror\t-0.7\ngrim\t-0.5\n"
    "creepy\t-0.5\nmessy\t-0.35\nslow\t-0.3\nnoisy\t-0.3\ncold\t-0.2\nwrong\t-0.45\n"
    "love\t0.8\ngreat\t0.7\ngood\t0.6\nhappy\t0.7\nawesome\t0.8\nexcellent\t0.85\n"
    "wonderful\t0.8\nbeautiful\t0.75\nnice\t0.55\nbest\t0.8\nfun\t0.6\nenjoy\t0.65\n"
    "glad\t0.6\njoy\t0.75\nlike\t0.4\ncool\t0.45\nperfect\t0.85\nbrilliant\t0.8\n"
    "fantastic\t0.85\nsuperb\t0.85\nadorable\t0.75\nsweet\t0.55\nkind\t0.55\n"
    "friend\t0.5\nsmile\t0.6\nlaugh\t0.55\nwin\t0.6\nwinner\t0.65\nhero\t0.65\n"
    "hope\t0.5\npeace\t0.6\ncalm\t0.4\ngentle\t0.45\nwarm\t0.4\nbright\t0.45\n"
    "clean\t0.35\nfresh\t0.4\nfavorite\t0.6\nthank\t0.55\ngrateful\t0.7\n"
    "proud\t0.55\nexcite\t0.6\ndelight\t0.75\ncharm\t0.55\ncute\t0.55\npretty\t0.55\n"
    "elegant\t0.6\ngraceful\t0.6\nwise\t0.5\nsmart\t0.55\nclever\t0.55\nstrong\t0.4\n"
    "brave\t0.55\nhonest\t0.6\nloyal\t0.55\nfair\t0.4\ntrust\t0.5\ncare\t0.45\n"
    "help\t0.45\nsupport\t0.45\npraise\t0.65\nadmire\t0.65\nadore\t0.8\ncheer\t0.6\n"
    "celebrate\t0.65\nmerry\t0.55\ngift\t0.5\ntreasure\t0.6\nparadise\t0.75\n"
    "heaven\t0.65\nmagic\t0.55\nmarvel\t0.7\nincredible\t0.7\nsuperior\t0.5\n"
    "ideal\t0.6\nsplendid\t0.75\nterrific\t0.75\ngrand\t0.5\nradiant\t0.65\n"
    "vivid\t0.4\nfine\t0.3\nokay\t0.2\ndecent\t0.35\nsolid\t0.35\ncomfort\t0.5\n"
    "cozy\t0.5\ntasty\t0.55\nyummy\t0.6\ndivine\t0.7\nneat\t0.4\ntriumph\t0.7\n"
    "victory\t0.65\nsafe\t0.4\nfree\t0.35\neasy\t0.35\nuseful\t0.5\nhelpful\t0.55\n"
    "positive\t0.5\noptimistic\t0.55\npleasant\t0.6\n";

constexpr std::u32string_view kSuffixes[] = {U"ing", U"ed", U"es", U"ly", U"s"};
constexpr std::size_t kMinStem = 3;

double stem_valence(std::u32string_view lowered, const SentimentLexicon& lex) {
  return lex.valence(utf8::encode(stem(lowered)));
}

}  // namespace

SentimentLexicon::SentimentLexicon(double negative_threshold)
    : negative_threshold_(negative_threshold) {
  if (!(negative_threshold < 0.0)) throw RangeError("negative threshold must be < 0");
}

void SentimentLexicon::set(std::string_view word, double valence) {
  if (!(valence >= -1.0 && valence <= 1.0)) {
    throw RangeError("valence " + std::to_string(valence) + " outside [-1, 1]");
  }
  const auto cps = utf8::decode(word);
  if (cps.empty()) throw DomainError("empty lexicon key");
  if (count_invisible(cps) != 0) throw DomainError("lexicon key contains invisible codepoints");
  entries_.insert_or_assign(utf8::encode(text::to_lower(cps)), valence);
}

double SentimentLexicon::valence(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? 0.0 : it->second;
}

bool SentimentLexicon::contains(std::string_view word) const {
  return entries_.find(word) != entries_.end();
}

void SentimentLexicon::write(std::ostream& out) const {
  for (const auto& [word, v] : entries_) out << word << '\t' << v << '\n';
}

SentimentLexicon load_lexicon(std::istream& in, double negative_threshold) {
  SentimentLexicon lex(negative_threshold);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("missing tab separator", lineno);
    const std::string_view word(line.data(), tab);
    const std::string_view num(line.data() + tab + 1, line.size() - tab - 1);
    double v = 0.0;
    auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc{} || end != num.data() + num.size() || num.empty()) {
      throw ParseError("non-numeric valence '" + std::string(num) + "'", lineno);
    }
    try {
      lex.set(word, v);
    } catch (const RangeError& e) {
      throw RangeError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return lex;
}

SentimentLexicon load_lexicon_file(const std::string& path, double negative_threshold) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file " + path);
  return load_lexicon(in, negative_threshold);
}

const SentimentLexicon& starter_lexicon() {
  static const SentimentLexicon lex = [] {
    std::string buf(kStarterLexicon);
    std::istringstream in(buf);
    return load_lexicon(in);
  }();
  return lex;
}

std::u32string stem(std::u32string_view word) {
  for (auto suffix : kSuffixes) {
    if (word.size() >= suffix.size() + kMinStem && word.ends_with(suffix)) {
      return std::u32string(word.substr(0, word.size() - suffix.size()));
    }
  }
  return std::u32string(word);
}

std::string stem(std::string_view word) { return utf8::encode(stem(utf8::decode(word))); }

bool word_is_negative(std::u32string_view word, const SentimentLexicon& lex) {
  return stem_valence(text::to_lower(word), lex) <= lex.negative_threshold();
}

bool word_is_negative(std::string_view word, const SentimentLexicon& lex) {
  return word_is_negative(utf8::decode(word), lex);
}

double sentence_negativity(std::string_view text, const SentimentLexicon& lex) {
  const auto cores = text::word_cores(utf8::decode(text));
  if (cores.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& core : cores) sum += std::max(0.0, -stem_valence(core, lex));
  return sum / static_cast<double>(cores.size());
}

}  // namespace zew
