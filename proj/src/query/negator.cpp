#include "negbench/query/negator.hpp"

#include <cctype>
#include <map>

#include "negbench/common/error.hpp"
#include "negbench/text/tagger.hpp"
#include "negbench/text/tokenizer.hpp"

namespace negbench::query {

using text::lowercase;
using text::TaggedCaption;

namespace {

// Copies the capitalization of the first letter of `like` onto `word`.
std::string match_case(std::string word, std::string_view like) {
  if (!like.empty() && !word.empty() &&
      std::isupper(static_cast<unsigned char>(like.front()))) {
    word.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(word.front())));
  }
  return word;
}

// Auxiliary -> tokens replacing it. Contracting forms become (stem, "n't");
// the rest take a separate "not".
std::vector<std::string> negate_aux(const std::string& surface) {
  static const std::map<std::string, std::string, std::less<>> kContracted = {
      {"is", "is"},       {"are", "are"},     {"was", "was"},
      {"were", "were"},   {"has", "has"},     {"have", "have"},
      {"had", "had"},     {"do", "do"},       {"does", "does"},
      {"did", "did"},     {"can", "ca"},      {"could", "could"},
      {"will", "wo"},     {"would", "would"}, {"should", "should"},
      {"must", "must"}};
  const std::string low = lowercase(surface);
  if (auto it = kContracted.find(low); it != kContracted.end()) {
    return {match_case(it->second, surface), "n't"};
  }
  if (low == "be" || low == "been" || low == "being") {
    return {match_case("not", surface), lowercase(surface)};
  }
  // am, may, might, shall, 're, 'm, 's
  return {surface, "not"};
}

bool is_with(const text::Token& t) {
  return lowercase(t.surface) == "with" && t.tag == "IN";
}

}  // namespace

std::vector<NegationSite> negatable_sites(const TaggedCaption& tc) {
  std::vector<NegationSite> sites;
  for (std::size_t i = 0; i < tc.tokens.size(); ++i) {
    const auto& t = tc.tokens[i];
    if (is_with(t)) {
      sites.push_back({i, SiteKind::kWith});
    } else if (text::is_aux(tc, i)) {
      sites.push_back({i, SiteKind::kAux});
    } else if (t.tag == "VBZ" || t.tag == "VBD" || t.tag == "VBP") {
      sites.push_back({i, SiteKind::kFiniteVerb});
    } else if (t.tag == "VBG" || t.tag == "VBN" || t.tag == "VB") {
      sites.push_back({i, SiteKind::kNonFiniteVerb});
    }
  }
  return sites;
}

NegatedCaption negate_at(const TaggedCaption& tc, const NegationSite& site,
                         const text::Morphology& morph) {
  bool valid = false;
  for (const auto& s : negatable_sites(tc)) {
    valid = valid || (s.token == site.token && s.kind == site.kind);
  }
  if (!valid) {
    throw Error(Errc::kInvalidArgument,
                "token " + std::to_string(site.token) + " is not a negation site");
  }
  const auto& tok = tc.tokens[site.token];
  std::vector<std::string> replacement;
  switch (site.kind) {
    case SiteKind::kWith:
      replacement = {match_case("without", tok.surface)};
      break;
    case SiteKind::kAux:
      replacement = negate_aux(tok.surface);
      break;
    case SiteKind::kFiniteVerb: {
      const auto tense = tok.tag == "VBD" ? text::Tense::kPast : text::Tense::kPresent;
      const auto person = tok.tag == "VBZ" ? text::Person::kThirdSingular
                                           : text::Person::kOther;
      // "did not meet" -> three tokens.
      std::string phrase = morph.do_support_negation(tok.surface, tense, person);
      replacement = text::tokenize(phrase);
      replacement.front() = match_case(replacement.front(), tok.surface);
      break;
    }
    case SiteKind::kNonFiniteVerb:
      replacement = {match_case("not", tok.surface), tok.surface};
      if (!tok.surface.empty() &&
          std::isupper(static_cast<unsigned char>(tok.surface.front())) &&
          site.token == 0) {
        replacement[1] = lowercase(tok.surface);
      }
      break;
  }
  NegatedCaption out;
  out.site = site.token;
  for (std::size_t i = 0; i < tc.tokens.size(); ++i) {
    if (i == site.token) {
      out.tokens.insert(out.tokens.end(), replacement.begin(), replacement.end());
    } else {
      out.tokens.push_back(tc.tokens[i].surface);
    }
  }
  out.text = text::detokenize(out.tokens);
  return out;
}

NegatedCaption negate_caption(const TaggedCaption& tc, Rng& rng,
                              const text::Morphology& morph,
                              const text::CueLexicon& cues) {
  if (!text::detect_negation_cues(tc, cues).empty()) {
    throw Error(Errc::kInvalidArgument,
                "caption " + tc.caption_id + " already contains a negation cue");
  }
  auto sites = negatable_sites(tc);
  if (sites.empty()) {
    throw Error(Errc::kNoNegatableSite,
                "caption " + tc.caption_id + " has no verb, auxiliary or 'with'");
  }
  const auto pick = rng.uniform_below(sites.size());
  return negate_at(tc, sites[pick], morph);
}

namespace {

// Restores a finite verb after "do/does/did" + cue is removed.
std::string reverse_do_support(const std::string& do_form, const text::Token& verb,
                               const text::Morphology& morph,
                               const std::string& caption_id) {
  const std::string lemma = morph.verb_lemma(verb.surface);
  const std::string low = lowercase(do_form);
  if (low == "did") {
    if (!morph.is_known_verb(lemma)) {
      throw Error(Errc::kUnresolvableCue,
                  "caption " + caption_id + ": past tense of unknown verb '" +
                      verb.surface + "'");
    }
    return morph.inflect(lemma, text::VerbForm::kPast);
  }
  if (low == "does") return morph.inflect(lemma, text::VerbForm::kThirdSingular);
  return lemma;
}

}  // namespace

std::string denegate_caption(const TaggedCaption& tc, const text::Morphology& morph,
                             const text::CueLexicon& cues) {
  const auto found = text::detect_negation_cues(tc, cues);
  if (found.empty()) {
    throw Error(Errc::kNoCue, "caption " + tc.caption_id + " has no negation cue");
  }
  std::vector<std::string> out;
  const auto& toks = tc.tokens;
  std::size_t i = 0;
  // Set when a do-support auxiliary was dropped; the next verb is re-inflected.
  std::string pending_do;
  while (i < toks.size()) {
    const auto& t = toks[i];
    const std::string low = lowercase(t.surface);
    if (!pending_do.empty() &&
        (text::is_verb_tag(t.tag) || morph.is_known_verb(low))) {
      std::string verb = reverse_do_support(pending_do, t, morph, tc.caption_id);
      out.push_back(out.empty() ? match_case(verb, pending_do) : verb);
      pending_do.clear();
      ++i;
      continue;
    }
    if (!pending_do.empty() && t.tag != "RB") {
      throw Error(Errc::kUnresolvableCue,
                  "caption " + tc.caption_id + ": do-support without a verb");
    }
    if (!cues.contains(t.surface)) {
      out.push_back(t.surface);
      ++i;
      continue;
    }
    if (low == "without") {
      out.push_back(match_case("with", t.surface));
    } else if (low == "not" || low == "n't" || low == "never") {
      const std::string prev = out.empty() ? std::string() : lowercase(out.back());
      if (text::is_do_form(prev)) {
        pending_do = out.back();
        out.pop_back();
      } else if (low == "n't" && prev == "ca") {
        out.back() = match_case("can", out.back());
      } else if (low == "n't" && prev == "wo") {
        out.back() = match_case("will", out.back());
      }
      // Otherwise the cue simply disappears.
    } else {
      throw Error(Errc::kUnresolvableCue,
                  "caption " + tc.caption_id + ": no safe affirmation for '" +
                      t.surface + "'");
    }
    ++i;
  }
  if (!pending_do.empty()) {
    throw Error(Errc::kUnresolvableCue,
                "caption " + tc.caption_id + ": do-support without a verb");
  }
  return text::detokenize(out);
}

}  // namespace negbench::query
