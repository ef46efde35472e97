#include "doctest.h"
#include "negbench/common/error.hpp"
#include "negbench/common/rng.hpp"
#include "negbench/text/chunk_parser.hpp"
#include "test_helpers.hpp"

using namespace negbench::text;
using negbench::testing::tagged;

namespace {
std::string parse(const std::string& words, const std::string& tags) {
  auto tc = tagged(words, tags);
  return chunk_parse(tc, ChunkGrammar::builtin()).to_string(tc);
}
std::string span_text(const TaggedCaption& tc, Span s) {
  return tc.text(s.begin, s.end);
}
}  // namespace

// Expected trees below were traced by hand through the four-rule cascade.
TEST_CASE("noun phrase chunk") {
  CHECK(parse("a man", "DT NN") == "(NP a/DT man/NN)");
}

TEST_CASE("prepositional phrase contains noun phrase") {
  CHECK(parse("on the floor", "IN DT NN") ==
        "(PP on/IN (NP the/DT floor/NN))");
}

TEST_CASE("verb phrase contains prepositional phrase") {
  CHECK(parse("sitting on the floor", "VBG IN DT NN") ==
        "(VP sitting/VBG (PP on/IN (NP the/DT floor/NN)))");
}

TEST_CASE("clause over subject and verb phrase") {
  CHECK(parse("a man takes selfie", "DT NN VBZ NN") ==
        "(CLAUSE (NP a/DT man/NN) (VP takes/VBZ (NP selfie/NN)))");
}

TEST_CASE("second pass lets a VP absorb a CLAUSE") {
  // pass 1: NP(man) VBZ NP(woman) VP(dance) -> VP(watches NP) ... ;
  // the CLAUSE(NP woman, VP dance) only forms once NP and VP exist.
  auto out = parse("a man watches a woman dance", "DT NN VBZ DT NN VB");
  CHECK(out ==
        "(CLAUSE (NP a/DT man/NN) (VP watches/VBZ (NP a/DT woman/NN))) "
        "(VP dance/VB)");
}

TEST_CASE("grammar parsing and validation") {
  auto g = ChunkGrammar::builtin();
  REQUIRE(g.rules.size() == 4);
  CHECK(g.rules[0].label == "NP");
  CHECK(g.rules[3].label == "CLAUSE");
  CHECK(g.loop_count == 2);
  CHECK_THROWS_AS(ChunkGrammar::parse("NP: {<XYZ>}"), negbench::Error);
  CHECK_THROWS_AS(ChunkGrammar::parse("NP: {<DT>+}"), negbench::Error);
  CHECK_THROWS_AS(ChunkGrammar::parse("NP <DT>"), negbench::Error);
  CHECK_THROWS_AS(ChunkGrammar::parse("NP: {<DT>}", 0), negbench::Error);
}

TEST_CASE("tag pattern longest match") {
  auto p = TagPattern::parse("<DT|JJ|NN.*>*<NN.*>");
  std::vector<std::string> syms = {"DT", "JJ", "NN", "NNS", "VBZ"};
  CHECK(p.longest_match(syms, 0) == 4);
  CHECK(p.longest_match(syms, 4) == -1);
  CHECK(p.longest_match(syms, 3) == 1);
}

TEST_CASE("subject/VP extraction") {
  SUBCASE("simple clause") {
    auto tc = tagged("a man takes selfie", "DT NN VBZ NN");
    auto pairs = extract_subject_vp_pairs(tc, chunk_parse(tc, ChunkGrammar::builtin()));
    REQUIRE(pairs.size() == 1);
    CHECK(span_text(tc, pairs[0].subject) == "a man");
    CHECK(span_text(tc, pairs[0].vp) == "takes selfie");
    CHECK(pairs[0].vp_head_verb == 2);
  }
  SUBCASE("no subject") {
    auto tc = tagged("raining heavily", "VBG RB");
    CHECK(extract_subject_vp_pairs(tc, chunk_parse(tc, ChunkGrammar::builtin()))
              .empty());
  }
  SUBCASE("coordinated VPs share the subject") {
    auto tc = tagged("a man is taking selfie and driving",
                     "DT NN VBZ VBG NN CC VBG");
    auto pairs = extract_subject_vp_pairs(tc, chunk_parse(tc, ChunkGrammar::builtin()));
    REQUIRE(pairs.size() == 2);
    CHECK(span_text(tc, pairs[0].subject) == "a man");
    CHECK(span_text(tc, pairs[0].vp) == "taking selfie");
    CHECK(span_text(tc, pairs[1].subject) == "a man");
    CHECK(span_text(tc, pairs[1].vp) == "driving");
  }
  SUBCASE("no VP") {
    auto tc = tagged("a red car", "DT JJ NN");
    CHECK(extract_subject_vp_pairs(tc, chunk_parse(tc, ChunkGrammar::builtin()))
              .empty());
  }
}

namespace {
TaggedCaption random_caption(negbench::Rng& rng) {
  static const std::vector<std::string> kTags = {
      "DT", "JJ", "NN", "NNS", "IN", "RP", "VBZ", "VBG", "VBD",
      "VB", "CC", "RB", "PRP", "TO", ".", "VBN", "NNP", "MD"};
  TaggedCaption tc{"r", "v", {}};
  const auto n = 1 + rng.uniform_below(20);
  for (std::size_t i = 0; i < n; ++i) {
    tc.tokens.push_back(Token{"w" + std::to_string(i),
                              kTags[rng.uniform_below(kTags.size())], i});
  }
  return tc;
}
}  // namespace

TEST_CASE("property: leaves reproduce the token sequence") {
  negbench::Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    auto tc = random_caption(rng);
    auto leaves = chunk_parse(tc, ChunkGrammar::builtin()).leaves();
    REQUIRE(leaves.size() == tc.tokens.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) CHECK(leaves[i] == i);
  }
}

TEST_CASE("property: more passes never lose CLAUSE chunks") {
  negbench::Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto tc = random_caption(rng);
    std::size_t prev = 0;
    for (int loops = 1; loops <= 4; ++loops) {
      auto g = ChunkGrammar::builtin();
      g.loop_count = loops;
      auto clauses = chunk_parse(tc, g).count("CLAUSE");
      CHECK(clauses >= prev);
      prev = clauses;
    }
  }
}

TEST_CASE("property: parsing is deterministic and pairs are well formed") {
  negbench::Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    auto tc = random_caption(rng);
    auto a = chunk_parse(tc, ChunkGrammar::builtin());
    auto b = chunk_parse(tc, ChunkGrammar::builtin());
    CHECK(a.to_string(tc) == b.to_string(tc));
    for (const auto& p : extract_subject_vp_pairs(tc, a)) {
      CHECK((p.subject.end <= p.vp.begin || p.vp.end <= p.subject.begin));
      CHECK(p.vp_head_verb >= p.vp.begin);
      CHECK(p.vp_head_verb < p.vp.end);
    }
  }
}
