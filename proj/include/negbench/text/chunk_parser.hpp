#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "negbench/text/token.hpp"

namespace negbench::text {

// A tag pattern in the regexp-chunker notation, restricted to what the
// built-in grammar needs: a sequence of `<ALT|ALT|...>` groups, each
// optionally followed by `*`; an alternative is a tag/label name, optionally
// ending in `.*` (prefix wildcard).
class TagPattern {
 public:
  struct Alternative {
    std::string name;
    bool prefix = false;  // "NN.*" matches NN, NNS, NNP, ...
  };
  struct Element {
    std::vector<Alternative> alternatives;
    bool star = false;
  };

  // Throws Error(kParse) on anything outside the supported subset.
  static TagPattern parse(std::string_view text);

  // Longest match starting at `start`, or -1 if none. A zero-length match
  // (all elements starred) returns 0.
  int longest_match(std::span<const std::string> symbols,
                    std::size_t start) const;

  const std::vector<Element>& elements() const { return elements_; }
  const std::string& source() const { return source_; }

 private:
  std::vector<Element> elements_;
  std::string source_;
};

struct ChunkRule {
  std::string label;
  TagPattern pattern;
};

struct ChunkGrammar {
  std::vector<ChunkRule> rules;
  int loop_count = 2;

  // NP / PP / VP / CLAUSE cascade over Penn Treebank tags.
  static ChunkGrammar builtin();
  // Parses "LABEL: {<pattern>}" lines; '#' starts a comment.
  static ChunkGrammar parse(std::string_view text, int loop_count = 2);

  // Every alternative must name a known tag (or tag prefix) or a label that
  // some rule of this grammar defines; loop_count must be positive.
  void validate() const;
};

struct ChunkNode {
  std::string label;        // empty for a token leaf
  std::size_t token = 0;    // leaf only
  std::vector<ChunkNode> children;

  bool is_leaf() const { return label.empty(); }
  std::size_t first_token() const;
  std::size_t last_token() const;
  void collect_leaves(std::vector<std::size_t>& out) const;
};

struct ChunkTree {
  std::vector<ChunkNode> roots;

  // Token indices of the leaves, left to right.
  std::vector<std::size_t> leaves() const;
  std::size_t count(std::string_view label) const;
  // Bracketed form, e.g. "(CLAUSE (NP a/DT man/NN) (VP runs/VBZ))".
  std::string to_string(const TaggedCaption& tc) const;
};

// Applies the rules in order, the whole cascade loop_count times. Each rule
// scans the current top-level node sequence left to right, grouping
// leftmost-longest non-overlapping matches; existing chunks match by label.
ChunkTree chunk_parse(const TaggedCaption& tc, const ChunkGrammar& grammar);

struct Span {
  std::size_t begin = 0;  // inclusive token index
  std::size_t end = 0;    // exclusive
  bool operator==(const Span&) const = default;
};

struct SubjectVPPair {
  Span subject;
  Span vp;
  std::size_t vp_head_verb = 0;  // token index
};

// One pair per VP chunk with a resolvable subject. Subject: the nearest
// preceding sibling NP (a preceding sibling CLAUSE contributes its leading
// NP, which covers coordinated VPs), else the leading NP of the smallest
// enclosing CLAUSE; VPs with neither are skipped. VPs made of a bare
// auxiliary ("is" in "is taking selfie") yield no pair of their own.
std::vector<SubjectVPPair> extract_subject_vp_pairs(const TaggedCaption& tc,
                                                    const ChunkTree& tree);

}  // namespace negbench::text
