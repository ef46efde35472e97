#pragma once

#include <string>
#include <vector>

#include "negbench/common/rng.hpp"
#include "negbench/text/cues.hpp"
#include "negbench/text/morphology.hpp"
#include "negbench/text/token.hpp"

namespace negbench::query {

enum class SiteKind {
  kAux,           // is -> isn't, can -> can't, be -> not be
  kFiniteVerb,    // VBZ/VBD/VBP lexical verb -> do-support
  kNonFiniteVerb, // VBG/VBN/VB -> "not" inserted before
  kWith,          // with -> without
};

struct NegationSite {
  std::size_t token = 0;
  SiteKind kind = SiteKind::kAux;
};

struct NegatedCaption {
  std::vector<std::string> tokens;
  std::string text;
  std::size_t site = 0;  // token index in the input caption
};

// Every verb, auxiliary and "with" preposition of the caption, left to right.
std::vector<NegationSite> negatable_sites(const text::TaggedCaption& tc);

// Negates exactly one site. Throws Error(kInvalidArgument) if `site` does not
// come from negatable_sites(tc).
NegatedCaption negate_at(const text::TaggedCaption& tc, const NegationSite& site,
                         const text::Morphology& morph = text::Morphology::builtin());

// Picks one site uniformly with `rng` and negates it. The caption must not
// already contain negation cues (Error kInvalidArgument); no site at all
// raises Error(kNoNegatableSite).
NegatedCaption negate_caption(
    const text::TaggedCaption& tc, Rng& rng,
    const text::Morphology& morph = text::Morphology::builtin(),
    const text::CueLexicon& cues = text::CueLexicon::standard());

// Removes every cue: without -> with, n't/not/never dropped, do-support
// reversed ("does not find" -> "finds") and contracted auxiliaries restored
// ("ca n't" -> "can"). Determiner/pronoun cues (no, none, nobody, nothing)
// and do-support over a verb whose past form cannot be trusted raise
// Error(kUnresolvableCue). Requires at least one cue (Error kNoCue).
std::string denegate_caption(
    const text::TaggedCaption& tc,
    const text::Morphology& morph = text::Morphology::builtin(),
    const text::CueLexicon& cues = text::CueLexicon::standard());

}  // namespace negbench::query
