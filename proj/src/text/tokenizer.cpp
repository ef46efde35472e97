#include "negbench/text/tokenizer.hpp"

#include <array>
#include <cctype>

#include "negbench/common/error.hpp"
#include "negbench/text/token.hpp"

namespace negbench::text {

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '(': case ')': case '[': case ']': case '{': case '}':
    case '"':
      return true;
    default:
      return false;
  }
}

bool is_opening(std::string_view t) {
  return t == "(" || t == "[" || t == "{";
}

bool attaches_left(std::string_view t) {
  static constexpr std::array<std::string_view, 13> kLeft = {
      ".", ",", "!", "?", ";", ":", ")", "]", "}", "n't", "'", "...", "%"};
  for (auto k : kLeft) {
    if (t == k) return true;
  }
  // 's 're 've 'll 'd 'm
  return t.size() >= 2 && t[0] == '\'' &&
         std::isalpha(static_cast<unsigned char>(t[1]));
}

void split_word(std::string_view w, std::vector<std::string>& out) {
  std::string lower = lowercase(w);
  // n't clitic.
  if (lower.size() > 3 && lower.ends_with("n't")) {
    out.emplace_back(w.substr(0, w.size() - 3));
    out.emplace_back(w.substr(w.size() - 3));
    return;
  }
  static constexpr std::array<std::string_view, 6> kClitics = {
      "'s", "'re", "'ve", "'ll", "'d", "'m"};
  for (auto c : kClitics) {
    if (lower.size() > c.size() && lower.ends_with(c)) {
      out.emplace_back(w.substr(0, w.size() - c.size()));
      out.emplace_back(w.substr(w.size() - c.size()));
      return;
    }
  }
  // Plural possessive: others' -> others '
  if (w.size() > 1 && w.back() == '\'') {
    out.emplace_back(w.substr(0, w.size() - 1));
    out.emplace_back("'");
    return;
  }
  out.emplace_back(w);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j == i) break;
    std::string_view chunk = text.substr(i, j - i);
    i = j;

    std::vector<std::string> tail;
    while (!chunk.empty() && is_edge_punct(chunk.front())) {
      out.emplace_back(1, chunk.front());
      chunk.remove_prefix(1);
    }
    // Ellipsis stays one token.
    if (chunk.ends_with("...") && chunk.size() > 3) {
      tail.emplace_back("...");
      chunk.remove_suffix(3);
    }
    while (!chunk.empty() && is_edge_punct(chunk.back())) {
      tail.emplace_back(1, chunk.back());
      chunk.remove_suffix(1);
    }
    if (!chunk.empty()) split_word(chunk, out);
    out.insert(out.end(), tail.rbegin(), tail.rend());
  }
  if (out.empty()) {
    throw Error(Errc::kEmptyCaption, "caption has no tokens");
  }
  return out;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  bool glue_next = false;
  for (const auto& t : tokens) {
    if (!out.empty() && !glue_next && !attaches_left(t)) out.push_back(' ');
    out += t;
    glue_next = is_opening(t);
  }
  return out;
}

}  // namespace negbench::text
