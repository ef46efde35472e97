#include "negbench/text/token.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "negbench/text/tokenizer.hpp"

namespace negbench::text {

namespace {
constexpr std::array<std::string_view, 45> kTags = {
    "CC",  "CD",  "DT",  "EX",   "FW",  "IN",  "JJ",   "JJR", "JJS",
    "LS",  "MD",  "NN",  "NNS",  "NNP", "NNPS", "PDT", "POS", "PRP",
    "PRP$", "RB", "RBR", "RBS",  "RP",  "SYM", "TO",   "UH",  "VB",
    "VBD", "VBG", "VBN", "VBP",  "VBZ", "WDT", "WP",   "WP$", "WRB",
    ".",   ",",   ":",   "``",   "''",  "(",   ")",    "$",   "#"};
}  // namespace

std::span<const std::string_view> known_tags() { return kTags; }

bool is_known_tag(std::string_view tag) {
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::string> TaggedCaption::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::string TaggedCaption::text(std::size_t begin, std::size_t end) const {
  std::vector<std::string> parts;
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    parts.push_back(tokens[i].surface);
  }
  return detokenize(parts);
}

}  // namespace negbench::text
