#include "negbench/text/morphology.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "negbench/text/token.hpp"

namespace negbench::text {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

int vowel_groups(std::string_view w) {
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups;
}

// One-syllable consonant-vowel-consonant stems double the final consonant.
bool doubles_final(std::string_view w) {
  if (w.size() < 3 || vowel_groups(w) != 1) return false;
  char last = w.back();
  return !is_vowel(last) && last != 'w' && last != 'x' && last != 'y' &&
         is_vowel(w[w.size() - 2]) && !is_vowel(w[w.size() - 3]);
}

bool ends_with_any(std::string_view w,
                   std::initializer_list<std::string_view> suffixes) {
  for (auto s : suffixes) {
    if (w.ends_with(s)) return true;
  }
  return false;
}

std::string regular_third_singular(std::string_view w) {
  std::string s(w);
  if (ends_with_any(w, {"s", "sh", "ch", "x", "z", "o"})) return s + "es";
  if (w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2])) {
    return s.substr(0, s.size() - 1) + "ies";
  }
  return s + "s";
}

std::string regular_gerund(std::string_view w) {
  std::string s(w);
  if (w.ends_with("ie")) return s.substr(0, s.size() - 2) + "ying";
  if (w.ends_with("e") && !ends_with_any(w, {"ee", "ye", "oe"}) &&
      w.size() > 2) {
    return s.substr(0, s.size() - 1) + "ing";
  }
  if (doubles_final(w)) return s + s.back() + "ing";
  return s + "ing";
}

std::string regular_past(std::string_view w) {
  std::string s(w);
  if (w.ends_with("e")) return s + "d";
  if (w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2])) {
    return s.substr(0, s.size() - 1) + "ied";
  }
  if (doubles_final(w)) return s + s.back() + "ed";
  return s + "ed";
}

const std::map<std::string, std::string, std::less<>>& irregular_plurals() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"men", "man"},       {"women", "woman"}, {"children", "child"},
      {"feet", "foot"},     {"teeth", "tooth"}, {"mice", "mouse"},
      {"geese", "goose"},   {"people", "people"}, {"police", "police"},
      {"news", "news"},     {"series", "series"}, {"species", "species"},
      {"glasses", "glasses"}, {"clothes", "clothes"}};
  return m;
}

// Modal and contracted-modal spellings that appear as separate tokens.
const std::map<std::string, std::string, std::less<>>& clitic_lemmas() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"ca", "can"}, {"wo", "will"}, {"'s", "be"}, {"'re", "be"},
      {"'m", "be"},  {"'ve", "have"}, {"'ll", "will"}, {"'d", "would"},
      {"are", "be"}, {"am", "be"}, {"were", "be"}};
  return m;
}

}  // namespace

const Morphology& Morphology::builtin() {
  static const Morphology m(Lexicon::builtin(), IrregularVerbs::builtin());
  return m;
}

bool Morphology::is_known_verb(std::string_view lemma) const {
  return is_irregular(lemma) || lexicon_->has_tag(lemma, "VB");
}

std::string Morphology::regular_stem(std::string_view w,
                                     std::string_view suffix) const {
  std::string stem(w.substr(0, w.size() - suffix.size()));
  // Candidates in preference order; the first one the lexicon knows as a
  // verb wins, otherwise the spelling heuristics decide.
  std::array<std::string, 3> cands;
  const bool doubled = stem.size() >= 2 && stem.back() == stem[stem.size() - 2] &&
                       !is_vowel(stem.back()) && stem.back() != 'l' &&
                       stem.back() != 's' && stem.back() != 'z';
  cands[0] = stem;
  cands[1] = stem + "e";
  cands[2] = doubled ? stem.substr(0, stem.size() - 1) : std::string();
  if (suffix == "ing" && stem.ends_with("y") && stem.size() >= 2) {
    // dying -> die
    std::string ie = stem.substr(0, stem.size() - 1) + "ie";
    if (is_known_verb(ie)) return ie;
  }
  for (const auto& c : {cands[2], cands[0], cands[1]}) {
    if (!c.empty() && is_known_verb(c)) return c;
  }
  if (doubled) return cands[2];
  // mak(e), danc(e), driv(e): consonant + single vowel + consonant in a
  // stem whose e-restored form is more plausible. Without a dictionary hit
  // fall back to the bare stem.
  if (stem.size() >= 2 &&
      ends_with_any(stem, {"c", "v", "z", "g"}) && !stem.ends_with("ng")) {
    return cands[1];
  }
  return stem;
}

std::string Morphology::verb_lemma(std::string_view form) const {
  std::string w = lowercase(form);
  if (auto it = clitic_lemmas().find(w); it != clitic_lemmas().end()) {
    return it->second;
  }
  if (auto irr = irregular_->lemma_of(w)) return *irr;
  if (is_known_verb(w)) return w;
  if (w.size() > 4 && w.ends_with("ing")) return regular_stem(w, "ing");
  if (w.size() > 3 && w.ends_with("ied")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 3 && w.ends_with("ed")) {
    auto stem = regular_stem(w, "ed");
    // "danced" -> "dance": regular_stem already tries stem + "e" ("danc" +
    // "e"); the bare "d" suffix case is covered there too.
    return stem;
  }
  if (w.size() > 3 && w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 3 &&
      ends_with_any(w, {"sses", "shes", "ches", "xes", "zes", "oes"})) {
    return w.substr(0, w.size() - 2);
  }
  if (w.size() > 2 && w.ends_with("s") && !w.ends_with("ss")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string Morphology::word_lemma(std::string_view word) const {
  std::string w = lowercase(word);
  if (auto it = irregular_plurals().find(w); it != irregular_plurals().end()) {
    return it->second;
  }
  if (auto it = clitic_lemmas().find(w); it != clitic_lemmas().end()) {
    return it->second;
  }
  if (auto irr = irregular_->lemma_of(w)) return *irr;
  const auto& tags = lexicon_->tags(w);
  auto has = [&](std::string_view t) {
    return std::find(tags.begin(), tags.end(), t) != tags.end();
  };
  if (has("NNS")) {
    for (std::string cand : {w.size() > 3 && w.ends_with("ies")
                                 ? w.substr(0, w.size() - 3) + "y"
                                 : std::string(),
                             w.size() > 2 ? w.substr(0, w.size() - 2) : "",
                             w.size() > 1 ? w.substr(0, w.size() - 1) : ""}) {
      if (!cand.empty() && lexicon_->has_tag(cand, "NN")) return cand;
    }
  }
  if (has("VBZ") || has("VBG") || has("VBD") || has("VBN")) {
    return verb_lemma(w);
  }
  if (!tags.empty()) return w;
  // Unknown word: strip the common inflectional suffixes.
  if (w.size() > 4 && (w.ends_with("ing") || w.ends_with("ed"))) {
    return verb_lemma(w);
  }
  if (w.size() > 3 && w.ends_with("s") && !w.ends_with("ss") &&
      !w.ends_with("us") && !w.ends_with("is")) {
    if (w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string Morphology::inflect(std::string_view form, VerbForm target) const {
  const std::string lemma = verb_lemma(form);
  const VerbForms* irr = irregular_->find_lemma(lemma);
  switch (target) {
    case VerbForm::kBase:
      return lemma;
    case VerbForm::kThirdSingular:
      return irr ? irr->third_singular : regular_third_singular(lemma);
    case VerbForm::kGerund:
      return irr ? irr->gerund : regular_gerund(lemma);
    case VerbForm::kPast:
      return irr ? irr->past : regular_past(lemma);
  }
  return lemma;
}

std::string Morphology::do_support_negation(std::string_view form, Tense tense,
                                            Person person) const {
  const char* aux = tense == Tense::kPast ? "did"
                    : person == Person::kThirdSingular ? "does"
                                                       : "do";
  return std::string(aux) + " not " + verb_lemma(form);
}

}  // namespace negbench::text
