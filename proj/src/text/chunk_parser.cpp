#include "negbench/text/chunk_parser.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/text/tagger.hpp"

namespace negbench::text {

namespace {

bool alternative_matches(const TagPattern::Alternative& alt,
                         std::string_view symbol) {
  return alt.prefix ? symbol.starts_with(alt.name) : symbol == alt.name;
}

bool element_matches(const TagPattern::Element& el, std::string_view symbol) {
  return std::any_of(el.alternatives.begin(), el.alternatives.end(),
                     [&](const auto& a) { return alternative_matches(a, symbol); });
}

std::string symbol_of(const ChunkNode& n, const TaggedCaption& tc) {
  return n.is_leaf() ? tc.tokens[n.token].tag : n.label;
}

}  // namespace

TagPattern TagPattern::parse(std::string_view text) {
  TagPattern p;
  p.source_ = std::string(trim(text));
  std::string_view s = p.source_;
  auto fail = [&](const std::string& why) {
    throw Error(Errc::kParse, "tag pattern '" + p.source_ + "': " + why);
  };
  while (!s.empty()) {
    if (s.front() == ' ') {
      s.remove_prefix(1);
      continue;
    }
    if (s.front() != '<') fail("expected '<'");
    auto close = s.find('>');
    if (close == std::string_view::npos) fail("unterminated '<'");
    std::string_view body = s.substr(1, close - 1);
    s.remove_prefix(close + 1);
    Element el;
    while (true) {
      auto bar = body.find('|');
      std::string_view alt = body.substr(0, bar);
      if (alt.empty()) fail("empty alternative");
      Alternative a;
      if (alt.ends_with(".*")) {
        a.prefix = true;
        alt.remove_suffix(2);
        if (alt.empty()) fail("bare wildcard");
      }
      for (char c : alt) {
        if (c == '.' || c == '*' || c == '(' || c == ')' || c == '+' ||
            c == '?' || c == '[' || c == ']') {
          fail("unsupported regex construct in '" + std::string(alt) + "'");
        }
      }
      a.name = std::string(alt);
      el.alternatives.push_back(std::move(a));
      if (bar == std::string_view::npos) break;
      body.remove_prefix(bar + 1);
    }
    if (!s.empty() && s.front() == '*') {
      el.star = true;
      s.remove_prefix(1);
    }
    p.elements_.push_back(std::move(el));
  }
  if (p.elements_.empty()) fail("empty pattern");
  return p;
}

int TagPattern::longest_match(std::span<const std::string> symbols,
                              std::size_t start) const {
  const std::size_t n = symbols.size();
  const std::size_t m = elements_.size();
  // memo[e][p]: longest match of elements[e..] starting at p, -1 = none,
  // -2 = not yet computed.
  std::vector<std::vector<int>> memo(m + 1, std::vector<int>(n + 1, -2));
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t e,
                                                        std::size_t pos) -> int {
    if (e == m) return 0;
    int& slot = memo[e][pos];
    if (slot != -2) return slot;
    const Element& el = elements_[e];
    int best = -1;
    if (el.star) {
      best = go(e + 1, pos);
      if (pos < n && element_matches(el, symbols[pos])) {
        int more = go(e, pos + 1);
        if (more >= 0) best = std::max(best, more + 1);
      }
    } else if (pos < n && element_matches(el, symbols[pos])) {
      int rest = go(e + 1, pos + 1);
      if (rest >= 0) best = rest + 1;
    }
    slot = best;
    return best;
  };
  return start <= n ? go(0, start) : -1;
}

ChunkGrammar ChunkGrammar::builtin() {
  return parse(R"(
    NP: {<DT|JJ|NN.*>*<NN.*>}
    PP: {<IN|RP><NP>}
    VP: {<VB.*><NP|PP|CLAUSE>*}
    CLAUSE: {<NP><VP>}
  )");
}

ChunkGrammar ChunkGrammar::parse(std::string_view text, int loop_count) {
  ChunkGrammar g;
  g.loop_count = loop_count;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    auto open = line.find('{');
    auto close = line.rfind('}');
    if (colon == std::string_view::npos || open == std::string_view::npos ||
        close == std::string_view::npos || open > close || colon > open) {
      throw Error(Errc::kParse,
                  "grammar rule must look like LABEL: {<pattern>}: '" +
                      std::string(line) + "'");
    }
    ChunkRule rule{std::string(trim(line.substr(0, colon))),
                   TagPattern::parse(line.substr(open + 1, close - open - 1))};
    if (rule.label.empty()) throw Error(Errc::kParse, "empty chunk label");
    g.rules.push_back(std::move(rule));
  }
  g.validate();
  return g;
}

void ChunkGrammar::validate() const {
  if (loop_count < 1) {
    throw Error(Errc::kInvalidArgument, "loop_count must be positive");
  }
  std::set<std::string, std::less<>> labels;
  for (const auto& r : rules) labels.insert(r.label);
  for (const auto& r : rules) {
    for (const auto& el : r.pattern.elements()) {
      for (const auto& alt : el.alternatives) {
        bool ok = false;
        if (alt.prefix) {
          for (auto t : known_tags()) ok = ok || t.starts_with(alt.name);
          for (const auto& l : labels) ok = ok || l.starts_with(alt.name);
        } else {
          ok = is_known_tag(alt.name) || labels.count(alt.name) > 0;
        }
        if (!ok) {
          throw Error(Errc::kParse, "rule " + r.label + " references '" +
                                        alt.name + "', which is neither a tag "
                                        "nor a grammar label");
        }
      }
    }
  }
}

std::size_t ChunkNode::first_token() const {
  return is_leaf() ? token : children.front().first_token();
}

std::size_t ChunkNode::last_token() const {
  return is_leaf() ? token : children.back().last_token();
}

void ChunkNode::collect_leaves(std::vector<std::size_t>& out) const {
  if (is_leaf()) {
    out.push_back(token);
    return;
  }
  for (const auto& c : children) c.collect_leaves(out);
}

std::vector<std::size_t> ChunkTree::leaves() const {
  std::vector<std::size_t> out;
  for (const auto& r : roots) r.collect_leaves(out);
  return out;
}

std::size_t ChunkTree::count(std::string_view label) const {
  std::size_t total = 0;
  std::function<void(const ChunkNode&)> walk = [&](const ChunkNode& n) {
    if (n.label == label) ++total;
    for (const auto& c : n.children) walk(c);
  };
  for (const auto& r : roots) walk(r);
  return total;
}

std::string ChunkTree::to_string(const TaggedCaption& tc) const {
  std::string out;
  std::function<void(const ChunkNode&)> emit = [&](const ChunkNode& n) {
    if (!out.empty() && out.back() != '(') out.push_back(' ');
    if (n.is_leaf()) {
      out += tc.tokens[n.token].surface + "/" + tc.tokens[n.token].tag;
      return;
    }
    out += "(" + n.label;
    for (const auto& c : n.children) emit(c);
    out.push_back(')');
  };
  for (const auto& r : roots) emit(r);
  return out;
}

ChunkTree chunk_parse(const TaggedCaption& tc, const ChunkGrammar& grammar) {
  ChunkTree tree;
  for (std::size_t i = 0; i < tc.tokens.size(); ++i) {
    tree.roots.push_back(ChunkNode{{}, i, {}});
  }
  for (int pass = 0; pass < grammar.loop_count; ++pass) {
    for (const auto& rule : grammar.rules) {
      std::vector<std::string> symbols;
      symbols.reserve(tree.roots.size());
      for (const auto& n : tree.roots) symbols.push_back(symbol_of(n, tc));
      std::vector<ChunkNode> next;
      next.reserve(tree.roots.size());
      std::size_t i = 0;
      while (i < tree.roots.size()) {
        int len = rule.pattern.longest_match(symbols, i);
        if (len > 0) {
          ChunkNode chunk{rule.label, 0, {}};
          for (int k = 0; k < len; ++k) {
            chunk.children.push_back(std::move(tree.roots[i + k]));
          }
          next.push_back(std::move(chunk));
          i += static_cast<std::size_t>(len);
        } else {
          next.push_back(std::move(tree.roots[i]));
          ++i;
        }
      }
      tree.roots = std::move(next);
    }
  }
  return tree;
}

namespace {

Span span_of(const ChunkNode& n) {
  return Span{n.first_token(), n.last_token() + 1};
}

const ChunkNode* leading_np(const ChunkNode& clause) {
  if (!clause.children.empty() && clause.children.front().label == "NP") {
    return &clause.children.front();
  }
  return nullptr;
}

bool is_bare_aux_vp(const ChunkNode& vp, const TaggedCaption& tc) {
  return vp.children.size() == 1 && vp.children[0].is_leaf() &&
         is_aux(tc, vp.children[0].token);
}

void collect_pairs(const std::vector<ChunkNode>& siblings,
                   const std::vector<const ChunkNode*>& enclosing_clauses,
                   const TaggedCaption& tc, std::vector<SubjectVPPair>& out) {
  for (std::size_t i = 0; i < siblings.size(); ++i) {
    const ChunkNode& node = siblings[i];
    if (node.is_leaf()) continue;
    if (node.label == "VP" && !is_bare_aux_vp(node, tc)) {
      const ChunkNode* subject = nullptr;
      for (std::size_t j = i; j-- > 0 && subject == nullptr;) {
        const ChunkNode& prev = siblings[j];
        if (prev.label == "NP") subject = &prev;
        else if (prev.label == "CLAUSE") subject = leading_np(prev);
      }
      for (auto it = enclosing_clauses.rbegin();
           subject == nullptr && it != enclosing_clauses.rend(); ++it) {
        subject = leading_np(**it);
      }
      if (subject != nullptr) {
        out.push_back(SubjectVPPair{span_of(*subject), span_of(node),
                                    node.first_token()});
      }
    }
    auto inner = enclosing_clauses;
    if (node.label == "CLAUSE") inner.push_back(&node);
    collect_pairs(node.children, inner, tc, out);
  }
}

}  // namespace

std::vector<SubjectVPPair> extract_subject_vp_pairs(const TaggedCaption& tc,
                                                    const ChunkTree& tree) {
  std::vector<SubjectVPPair> out;
  collect_pairs(tree.roots, {}, tc, out);
  return out;
}

}  // namespace negbench::text
