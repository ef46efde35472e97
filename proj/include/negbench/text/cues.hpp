#pragma once

#include <set>
#include <string>
#include <vector>

#include "negbench/text/token.hpp"

namespace negbench::text {

struct CueLexicon {
  std::set<std::string, std::less<>> cues;

  // no, not, n't, never, without, none, nobody, nothing
  static const CueLexicon& standard();
  bool contains(std::string_view surface) const;
};

// Tokens whose lowercased surface is a cue, in caption order.
std::vector<Token> detect_negation_cues(
    const TaggedCaption& tc, const CueLexicon& lexicon = CueLexicon::standard());

}  // namespace negbench::text
