#pragma once

#include <string>
#include <string_view>

#include "negbench/text/lexicon.hpp"

namespace negbench::text {

enum class VerbForm { kBase, kThirdSingular, kGerund, kPast };
enum class Tense { kPresent, kPast };
enum class Person { kThirdSingular, kOther };

// Rule-based English verb inflection and word lemmatization. Irregular forms
// come from the IrregularVerbs table; regular forms follow the usual
// spelling rules (e-drop, consonant-y, CVC doubling on one-syllable stems).
// The lexicon is consulted only to pick between candidate stems
// ("taking" -> "take" rather than "tak").
class Morphology {
 public:
  Morphology(const Lexicon& lexicon, const IrregularVerbs& irregular)
      : lexicon_(&lexicon), irregular_(&irregular) {}
  static const Morphology& builtin();

  // Base form of a verb token in any inflection. Case is folded.
  std::string verb_lemma(std::string_view form) const;
  // Lemma for indexing: irregular verbs, irregular plurals, then suffix rules.
  std::string word_lemma(std::string_view word) const;

  std::string inflect(std::string_view form, VerbForm target) const;
  // "do not <base>" with do/does/did chosen by tense and person.
  std::string do_support_negation(std::string_view form, Tense tense,
                                  Person person) const;

  bool is_irregular(std::string_view lemma) const {
    return irregular_->find_lemma(lemma) != nullptr;
  }
  // Irregular, or listed in the lexicon with a VB reading.
  bool is_known_verb(std::string_view lemma) const;

  const Lexicon& lexicon() const { return *lexicon_; }
  const IrregularVerbs& irregular() const { return *irregular_; }

 private:
  std::string regular_stem(std::string_view word, std::string_view suffix) const;

  const Lexicon* lexicon_;
  const IrregularVerbs* irregular_;
};

}  // namespace negbench::text
