#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "negbench/text/lexicon.hpp"
#include "negbench/text/token.hpp"

namespace negbench::text {

// Lexicon + suffix-heuristic POS tagger with a handful of left-context
// disambiguation rules. Deterministic; unknown words fall back to NN.
class Tagger {
 public:
  explicit Tagger(const Lexicon& lexicon = Lexicon::builtin())
      : lexicon_(&lexicon) {}

  TaggedCaption tag(std::span<const std::string> tokens,
                    std::string caption_id = {},
                    std::string video_id = {}) const;

 private:
  std::vector<std::string> candidates(const std::string& surface) const;

  const Lexicon* lexicon_;
};

// Auxiliary: a verb-tagged token whose surface is a be/modal form, or a
// have/do form that is followed by another verb within two tokens.
bool is_aux(const TaggedCaption& tc, std::size_t i);
bool is_be_form(std::string_view surface);
bool is_do_form(std::string_view surface);
bool is_have_form(std::string_view surface);
bool is_modal(std::string_view surface);

// Pre-tagged TSV: `caption_id<TAB>index<TAB>surface<TAB>tag`, one token per
// line, blank line between captions. video_id is left empty unless the caller
// fills it in. Throws Error(kParse) on malformed rows, unknown tags, or
// non-contiguous indices.
std::vector<TaggedCaption> read_pretagged(std::istream& in);
void write_pretagged(std::ostream& out, std::span<const TaggedCaption> captions);

}  // namespace negbench::text
