#include "negbench/query/composer.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "negbench/common/error.hpp"
#include "negbench/text/token.hpp"

namespace negbench::query {

using text::VerbForm;

std::string_view pronoun_text(Pronoun p) {
  switch (p) {
    case Pronoun::kHe: return "he";
    case Pronoun::kShe: return "she";
    case Pronoun::kIt: return "it";
    case Pronoun::kThey: return "they";
    case Pronoun::kUnknown: return "unknown";
  }
  return "unknown";
}

Pronoun pronoun_for_subject(std::string_view subject, const text::Morphology& morph) {
  static const std::map<std::string, Pronoun, std::less<>> kLexicon = {
      {"man", Pronoun::kHe},       {"boy", Pronoun::kHe},
      {"guy", Pronoun::kHe},       {"gentleman", Pronoun::kHe},
      {"father", Pronoun::kHe},    {"son", Pronoun::kHe},
      {"brother", Pronoun::kHe},   {"husband", Pronoun::kHe},
      {"king", Pronoun::kHe},      {"he", Pronoun::kHe},
      {"woman", Pronoun::kShe},    {"girl", Pronoun::kShe},
      {"lady", Pronoun::kShe},     {"mother", Pronoun::kShe},
      {"daughter", Pronoun::kShe}, {"sister", Pronoun::kShe},
      {"wife", Pronoun::kShe},     {"actress", Pronoun::kShe},
      {"queen", Pronoun::kShe},    {"she", Pronoun::kShe},
      {"car", Pronoun::kIt},       {"truck", Pronoun::kIt},
      {"train", Pronoun::kIt},     {"plane", Pronoun::kIt},
      {"boat", Pronoun::kIt},      {"dog", Pronoun::kIt},
      {"cat", Pronoun::kIt},       {"it", Pronoun::kIt},
      {"kids", Pronoun::kThey},    {"people", Pronoun::kThey},
      {"children", Pronoun::kThey}, {"they", Pronoun::kThey}};
  std::istringstream ss{std::string(subject)};
  std::string head;
  for (std::string w; ss >> w;) head = w;
  head = text::lowercase(head);
  if (auto it = kLexicon.find(head); it != kLexicon.end()) return it->second;
  const auto& tags = morph.lexicon().tags(head);
  if (!tags.empty() && tags.front() == "NNS") return Pronoun::kThey;
  if (tags.empty() && head.size() > 3 && head.ends_with("s") &&
      !head.ends_with("ss")) {
    return Pronoun::kThey;
  }
  return Pronoun::kUnknown;
}

TemplateSet template_set_for(Pronoun p) {
  return p == Pronoun::kUnknown ? TemplateSet::kPronounUnknown
                                : TemplateSet::kPronounKnown;
}

namespace {

struct VerbPhrase {
  std::string head;
  std::string rest;  // leading space included when non-empty

  std::string as(VerbForm f, const text::Morphology& m) const {
    return m.inflect(head, f) + rest;
  }
};

VerbPhrase split_vp(const std::string& vp) {
  std::istringstream ss(vp);
  VerbPhrase out;
  ss >> out.head;
  std::string w;
  while (ss >> w) out.rest += " " + w;
  if (out.head.empty()) throw Error(Errc::kInvalidArgument, "empty verb phrase");
  return out;
}

}  // namespace

ComposedText render_template(const ComposedTriplet& t, int index,
                             const text::Morphology& m) {
  if (t.subject.empty()) throw Error(Errc::kInvalidArgument, "empty subject");
  const auto a = split_vp(t.pos_vp);
  const auto b = split_vp(t.neg_vp);
  const std::string& s = t.subject;
  const TemplateSet set = template_set_for(t.pronoun);
  const bool plural = t.pronoun == Pronoun::kThey;
  const std::string pron(pronoun_text(t.pronoun));
  const std::string be = plural ? "are" : "is";
  const std::string dont = plural ? "don't" : "doesn't";
  const std::string fin_a = a.as(plural ? VerbForm::kBase : VerbForm::kThirdSingular, m);
  const std::string base_b = b.as(VerbForm::kBase, m);
  const std::string ger_a = a.as(VerbForm::kGerund, m);
  const std::string ger_b = b.as(VerbForm::kGerund, m);

  ComposedText out;
  out.set = set;
  out.template_index = index;
  out.pos_subquery = s + " " + be + " " + ger_a;
  if (set == TemplateSet::kPronounKnown) {
    out.neg_subquery = pron + " " + be + " " + ger_b;
    switch (index) {
      case 0: out.text = s + " " + fin_a + " and " + pron + " " + dont + " " + base_b; break;
      case 1: out.text = s + " " + dont + " " + base_b + " and " + pron + " " + fin_a; break;
      case 2: out.text = s + " " + ger_a + " and not " + ger_b; break;
      case 3: out.text = s + " not " + ger_b + " and " + pron + " " + ger_a; break;
      case 4: out.text = s + " " + be + " " + ger_a + " and not " + ger_b; break;
      case 5: out.text = s + " " + be + " not " + ger_b + " and " + pron + " " + be + " " + ger_a; break;
      case kProseTemplate:
        out.text = s + " " + be + " " + ger_a + " and " + pron + " " + be + " not " + ger_b;
        break;
      default:
        throw Error(Errc::kInvalidArgument, "template index out of range");
    }
  } else {
    out.neg_subquery = s + " is " + ger_b;
    const std::string s3_a = a.as(VerbForm::kThirdSingular, m);
    switch (index) {
      case 0: out.text = s + " " + s3_a + " and doesn't " + base_b; break;
      case 1: out.text = s + " doesn't " + base_b + " while " + s3_a; break;
      case 2: out.text = s + " " + ger_a + " and not " + ger_b; break;
      case 3: out.text = s + " not " + ger_b + " while " + ger_a; break;
      case 4: out.text = s + " is " + ger_a + " and not " + ger_b; break;
      case 5: out.text = s + " is not " + ger_b + " while " + ger_a; break;
      default:
        throw Error(Errc::kInvalidArgument, "template index out of range");
    }
  }
  return out;
}

ComposedText compose_query(const ComposedTriplet& t, Rng& rng, bool include_prose,
                           const text::Morphology& morph) {
  int choices = kTemplatesPerSet;
  if (include_prose && template_set_for(t.pronoun) == TemplateSet::kPronounKnown) {
    ++choices;
  }
  const int index = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(choices)));
  return render_template(t, index, morph);
}

}  // namespace negbench::query
