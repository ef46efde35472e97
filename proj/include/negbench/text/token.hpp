#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace negbench::text {

// Penn Treebank tags plus the punctuation tags the tokenizer can produce.
// Anything outside this set is rejected when reading pre-tagged input.
std::span<const std::string_view> known_tags();
bool is_known_tag(std::string_view tag);

inline bool is_verb_tag(std::string_view tag) {
  return tag.size() >= 2 && tag.substr(0, 2) == "VB";
}
inline bool is_noun_tag(std::string_view tag) {
  return tag.size() >= 2 && tag.substr(0, 2) == "NN";
}

struct Token {
  std::string surface;
  std::string tag;
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

struct TaggedCaption {
  std::string caption_id;
  std::string video_id;
  std::vector<Token> tokens;

  std::vector<std::string> surfaces() const;
  // Surfaces of [begin, end) rejoined with the detokenizer's spacing rules.
  std::string text(std::size_t begin, std::size_t end) const;
  std::string text() const { return text(0, tokens.size()); }
};

std::string lowercase(std::string_view s);

}  // namespace negbench::text
