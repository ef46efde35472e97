#include <fstream>
#include <sstream>

#include "doctest.h"
#include "negbench/common/error.hpp"
#include "negbench/text/cues.hpp"
#include "negbench/text/tagger.hpp"
#include "negbench/text/tokenizer.hpp"
#include "test_helpers.hpp"

using namespace negbench::text;
using negbench::testing::fixture;
using negbench::testing::tagged;

namespace {
std::string tags_of(const TaggedCaption& tc) {
  std::string out;
  for (const auto& t : tc.tokens) out += (out.empty() ? "" : " ") + t.tag;
  return out;
}
std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}
}  // namespace

TEST_CASE("builtin lexicon loads") {
  CHECK(Lexicon::builtin().size() > 2000);
  CHECK(Lexicon::builtin().tags("man").front() == "NN");
}

TEST_CASE("tagger handles unambiguous common words") {
  Tagger tagger;
  auto tc = tagger.tag(split("a man is running"));
  CHECK(tags_of(tc) == "DT NN VBZ VBG");
  for (std::size_t i = 0; i < tc.tokens.size(); ++i) CHECK(tc.tokens[i].index == i);
}

TEST_CASE("unknown words fall back to NN") {
  Tagger tagger;
  CHECK(tags_of(tagger.tag(split("xqzt"))) == "NN");
}

TEST_CASE("suffix heuristics for unknown words") {
  Tagger tagger;
  CHECK(tagger.tag(split("blorfing")).tokens[0].tag == "VBG");
  CHECK(tagger.tag(split("blorfed")).tokens[0].tag == "VBD");
}

TEST_CASE("tagger reproduces the rule-table captions") {
  Tagger tagger;
  std::ifstream in(fixture("negation_rules.tagged.tsv"));
  for (const auto& expected : read_pretagged(in)) {
    auto got = tagger.tag(expected.surfaces());
    CHECK_MESSAGE(tags_of(got) == tags_of(expected), expected.caption_id);
  }
}

TEST_CASE("context rules pick noun or verb readings") {
  Tagger tagger;
  CHECK(tags_of(tagger.tag(split("kids play in the park"))) ==
        "NNS VBP IN DT NN");
  CHECK(tags_of(tagger.tag(split("a play"))) == "DT NN");
  CHECK(tags_of(tagger.tag(split("he has played"))) == "PRP VBZ VBN");
}

TEST_CASE("pre-tagged rows are preserved verbatim") {
  std::istringstream in("c1\t0\tSome\tDT\nc1\t1\tguys\tNNS\nc1\t2\tmet\tVBD\n\n"
                        "c2\t0\tit\tPRP\n");
  auto caps = read_pretagged(in);
  REQUIRE(caps.size() == 2);
  CHECK(caps[0].tokens[2].surface == "met");
  CHECK(caps[0].tokens[2].tag == "VBD");
  CHECK(caps[1].caption_id == "c2");

  std::ostringstream out;
  write_pretagged(out, caps);
  std::istringstream again(out.str());
  auto round = read_pretagged(again);
  CHECK(round[0].tokens == caps[0].tokens);
}

TEST_CASE("pre-tagged reader rejects malformed input") {
  auto fails = [](const std::string& s) {
    std::istringstream in(s);
    CHECK_THROWS_AS(read_pretagged(in), negbench::Error);
  };
  fails("c1\t0\ta\tBOGUS\n");
  fails("c1\t1\ta\tDT\n");
  fails("c1\t0\ta\n");
  fails("c1\t0\ta\tDT\nc2\t1\tman\tNN\n");
}

TEST_CASE("auxiliary classification") {
  auto tc = tagged("a man is running", "DT NN VBZ VBG");
  CHECK(is_aux(tc, 2));
  CHECK_FALSE(is_aux(tc, 3));
  auto has_main = tagged("a man has a dog", "DT NN VBZ DT NN");
  CHECK_FALSE(is_aux(has_main, 2));
  auto has_aux = tagged("a man has eaten", "DT NN VBZ VBN");
  CHECK(is_aux(has_aux, 2));
}

TEST_CASE("negation cue detection") {
  auto a = tagged("a boy running without dress", "DT NN VBG IN NN");
  auto cues = detect_negation_cues(a);
  REQUIRE(cues.size() == 1);
  CHECK(cues[0].surface == "without");
  CHECK(detect_negation_cues(tagged("a man is playing guitar",
                                    "DT NN VBZ VBG NN")).empty());
  auto b = tagged("he is n't running", "PRP VBZ RB VBG");
  cues = detect_negation_cues(b);
  REQUIRE(cues.size() == 1);
  CHECK(cues[0].surface == "n't");

  CueLexicon custom{{"hardly"}};
  CHECK(detect_negation_cues(tagged("he hardly runs", "PRP RB VBZ"), custom)
            .size() == 1);
}
