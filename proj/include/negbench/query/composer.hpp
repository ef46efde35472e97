#pragma once

#include <string>
#include <string_view>

#include "negbench/common/rng.hpp"
#include "negbench/text/morphology.hpp"

namespace negbench::query {

enum class Pronoun { kHe, kShe, kIt, kThey, kUnknown };

std::string_view pronoun_text(Pronoun p);

// Pronoun of a subject noun phrase, from its head (last) word: a small
// lexicon (man -> he, woman -> she, car -> it, kids -> they, ...), then any
// plural noun -> they; everything else is unknown.
Pronoun pronoun_for_subject(std::string_view subject,
                            const text::Morphology& morph = text::Morphology::builtin());

struct ComposedTriplet {
  std::string subject;  // "a man"
  std::string pos_vp;   // base form, "take selfie"
  std::string neg_vp;   // base form, "drive down a road"
  Pronoun pronoun = Pronoun::kUnknown;
};

enum class TemplateSet {
  kPronounKnown,    // "Kids do A and they don't do B." family
  kPronounUnknown,  // "A kid does A and doesn't do B." family
};

inline constexpr int kTemplatesPerSet = 6;
// Index of the extra pronoun-known phrasing
// "<S> is doing A and <pron> is not doing B"; drawn only when enabled.
inline constexpr int kProseTemplate = 6;

struct ComposedText {
  std::string text;
  std::string pos_subquery;  // "a man is taking selfie"
  std::string neg_subquery;  // "he is driving down a road"
  TemplateSet set = TemplateSet::kPronounUnknown;
  int template_index = 0;
};

TemplateSet template_set_for(Pronoun p);

// Renders one template. Valid indices are [0, 6), plus kProseTemplate for
// the pronoun-known set. Verbs are inflected to fit each slot and agree with
// the subject's number.
ComposedText render_template(const ComposedTriplet& t, int index,
                             const text::Morphology& morph = text::Morphology::builtin());

// Uniform choice among the six templates of the triplet's set (seven when
// include_prose is set and the pronoun is known).
ComposedText compose_query(const ComposedTriplet& t, Rng& rng,
                           bool include_prose = false,
                           const text::Morphology& morph = text::Morphology::builtin());

}  // namespace negbench::query
