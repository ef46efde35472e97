#include "negbench/text/cues.hpp"

namespace negbench::text {

const CueLexicon& CueLexicon::standard() {
  static const CueLexicon lex{{"no", "not", "n't", "never", "without", "none",
                               "nobody", "nothing"}};
  return lex;
}

bool CueLexicon::contains(std::string_view surface) const {
  return cues.find(lowercase(surface)) != cues.end();
}

std::vector<Token> detect_negation_cues(const TaggedCaption& tc,
                                        const CueLexicon& lexicon) {
  std::vector<Token> out;
  for (const auto& t : tc.tokens) {
    if (lexicon.contains(t.surface)) out.push_back(t);
  }
  return out;
}

}  // namespace negbench::text
