#include "negbench/text/tagger.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"

namespace negbench::text {

namespace {

template <std::size_t N>
bool in_set(std::string_view s, const std::array<std::string_view, N>& set) {
  auto low = lowercase(s);
  return std::find(set.begin(), set.end(), low) != set.end();
}

bool contains(const std::vector<std::string>& v, std::string_view x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::string punct_tag(std::string_view s) {
  if (s == "." || s == "!" || s == "?") return ".";
  if (s == ",") return ",";
  if (s == ";" || s == ":" || s == "..." || s == "-" || s == "--") return ":";
  if (s == "(" || s == "[" || s == "{") return "(";
  if (s == ")" || s == "]" || s == "}") return ")";
  if (s == "\"") return "''";
  if (s == "$") return "$";
  if (s == "#") return "#";
  return {};
}

bool is_number(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

bool is_noun_like(std::string_view t) {
  return is_noun_tag(t) || t == "PRP" || t == "WP" || t == "EX";
}

std::string first_with_prefix(const std::vector<std::string>& c,
                              std::string_view prefix) {
  for (const auto& t : c) {
    if (t.starts_with(prefix)) return t;
  }
  return {};
}

}  // namespace

bool is_be_form(std::string_view s) {
  static constexpr std::array<std::string_view, 10> k = {
      "is", "are", "was", "were", "am", "be", "been", "being", "'re", "'m"};
  return in_set(s, k);
}
bool is_do_form(std::string_view s) {
  static constexpr std::array<std::string_view, 3> k = {"do", "does", "did"};
  return in_set(s, k);
}
bool is_have_form(std::string_view s) {
  static constexpr std::array<std::string_view, 3> k = {"has", "have", "had"};
  return in_set(s, k);
}
bool is_modal(std::string_view s) {
  static constexpr std::array<std::string_view, 11> k = {
      "can", "could", "will", "would", "shall", "should",
      "may", "might", "must", "ca",    "wo"};
  return in_set(s, k);
}

bool is_aux(const TaggedCaption& tc, std::size_t i) {
  const Token& t = tc.tokens.at(i);
  if (is_modal(t.surface)) return true;
  if (!is_verb_tag(t.tag)) return false;
  if (is_be_form(t.surface)) return true;
  if (is_have_form(t.surface) || is_do_form(t.surface)) {
    for (std::size_t j = i + 1; j < tc.tokens.size() && j <= i + 2; ++j) {
      const auto& next = tc.tokens[j];
      if (is_verb_tag(next.tag)) return true;
      if (next.tag != "RB" && next.surface != "n't") break;
    }
  }
  return false;
}

std::vector<std::string> Tagger::candidates(const std::string& surface) const {
  if (auto p = punct_tag(surface); !p.empty()) return {p};
  if (is_number(surface)) return {"CD"};
  const auto& known = lexicon_->tags(surface);
  if (!known.empty()) return known;
  const std::string low = lowercase(surface);
  if (low.size() > 4 && low.ends_with("ing")) return {"VBG", "NN"};
  if (low.size() > 3 && low.ends_with("ed")) return {"VBD", "VBN", "JJ"};
  if (low.size() > 2 && low.ends_with("s")) {
    std::string stem = low.substr(0, low.size() - 1);
    std::string stem_es = low.size() > 3 ? low.substr(0, low.size() - 2) : "";
    if (lexicon_->has_tag(stem, "VB") ||
        (!stem_es.empty() && lexicon_->has_tag(stem_es, "VB"))) {
      return {"VBZ", "NNS"};
    }
  }
  return {"NN"};
}

TaggedCaption Tagger::tag(std::span<const std::string> tokens,
                          std::string caption_id, std::string video_id) const {
  TaggedCaption tc{std::move(caption_id), std::move(video_id), {}};
  tc.tokens.reserve(tokens.size());
  std::vector<std::vector<std::string>> cands;
  cands.reserve(tokens.size());
  for (const auto& t : tokens) cands.push_back(candidates(t));

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& c = cands[i];
    std::string chosen = c.front();
    const std::string prev = i > 0 ? tc.tokens[i - 1].tag : std::string();
    const std::string prev_surface =
        i > 0 ? tc.tokens[i - 1].surface : std::string();

    const std::string noun = first_with_prefix(c, "NN");
    const std::string verb = first_with_prefix(c, "VB");
    if (!noun.empty() && !verb.empty()) {
      if (prev == "DT" || prev == "PRP$" || prev == "JJ" || prev == "POS" ||
          prev == "CD") {
        chosen = noun;
      } else if (prev == "TO" || prev == "MD") {
        chosen = contains(c, "VB") ? "VB" : verb;
      } else if (is_noun_like(prev) || prev == "RB" || prev == "CC" ||
                 (i > 0 && is_be_form(prev_surface))) {
        // A verb reading right after a subject, adverb or coordinator.
        if (i > 0 && is_be_form(prev_surface)) {
          chosen = contains(c, "VBG")   ? "VBG"
                   : contains(c, "VBN") ? "VBN"
                                        : chosen;
        } else {
          chosen = verb;
        }
      }
    }
    if (chosen == "VBD" && contains(c, "VBN") && i > 0 &&
        (is_be_form(prev_surface) || is_have_form(prev_surface))) {
      chosen = "VBN";
    }
    if (chosen == "VB" && i > 0 && prev != "TO" && prev != "MD" &&
        (is_noun_like(prev) || prev == "RB") &&
        !is_do_form(prev_surface)) {
      chosen = "VBP";
    }
    if (chosen == "IN" && contains(c, "RB")) {
      // A preposition needs an object; "running around and ..." has none.
      bool object_follows = false;
      if (i + 1 < tokens.size()) {
        for (const auto& t : cands[i + 1]) {
          if (t == "DT" || t == "JJ" || t == "PRP$" || t == "PRP" ||
              t == "CD" || is_noun_tag(t) || t == "VBG") {
            object_follows = true;
          }
        }
      }
      if (!object_follows) chosen = "RB";
    }
    if (lowercase(tokens[i]) == "'s" && i + 1 < tokens.size()) {
      const auto& next = cands[i + 1];
      if (contains(next, "VBG") || contains(next, "VBN")) chosen = "VBZ";
    }
    tc.tokens.push_back(Token{tokens[i], chosen, i});
  }
  return tc;
}

std::vector<TaggedCaption> read_pretagged(std::istream& in) {
  std::vector<TaggedCaption> out;
  TaggedCaption current;
  auto flush = [&] {
    if (!current.tokens.empty()) out.push_back(std::move(current));
    current = TaggedCaption{};
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) {
      flush();
      continue;
    }
    auto cols = split_tabs(line);
    auto fail = [&](const std::string& why) {
      throw Error(Errc::kParse,
                  "pre-tagged line " + std::to_string(lineno) + ": " + why);
    };
    if (cols.size() != 4) fail("expected 4 tab-separated columns");
    if (cols[2].empty()) fail("empty surface");
    if (!is_known_tag(cols[3])) fail("unknown tag '" + cols[3] + "'");
    std::size_t index = 0;
    try {
      index = std::stoul(cols[1]);
    } catch (...) {
      fail("bad index '" + cols[1] + "'");
    }
    if (!current.tokens.empty() && cols[0] != current.caption_id) {
      fail("caption id changed without a blank separator line");
    }
    if (index != current.tokens.size()) fail("token indices must be 0,1,2,...");
    current.caption_id = cols[0];
    current.tokens.push_back(Token{cols[2], cols[3], index});
  }
  flush();
  return out;
}

void write_pretagged(std::ostream& out,
                     std::span<const TaggedCaption> captions) {
  bool first = true;
  for (const auto& tc : captions) {
    if (!first) out << '\n';
    first = false;
    for (const auto& t : tc.tokens) {
      out << tc.caption_id << '\t' << t.index << '\t' << t.surface << '\t'
          << t.tag << '\n';
    }
  }
}

}  // namespace negbench::text
