#include <sstream>

#include "doctest.h"
#include "negbench/common/rng.hpp"
#include "negbench/text/morphology.hpp"

using namespace negbench::text;

TEST_CASE("do-support negation") {
  const auto& m = Morphology::builtin();
  CHECK(m.do_support_negation("met", Tense::kPast, Person::kOther) ==
        "did not meet");
  CHECK(m.do_support_negation("met", Tense::kPast, Person::kThirdSingular) ==
        "did not meet");
  CHECK(m.do_support_negation("finds", Tense::kPresent,
                              Person::kThirdSingular) == "does not find");
  CHECK(m.do_support_negation("play", Tense::kPresent, Person::kOther) ==
        "do not play");
}

TEST_CASE("inflection targets") {
  const auto& m = Morphology::builtin();
  CHECK(m.inflect("play", VerbForm::kGerund) == "playing");
  CHECK(m.inflect("take", VerbForm::kGerund) == "taking");
  CHECK(m.inflect("sit", VerbForm::kGerund) == "sitting");
  CHECK(m.inflect("run", VerbForm::kGerund) == "running");
  CHECK(m.inflect("drive", VerbForm::kThirdSingular) == "drives");
  CHECK(m.inflect("watch", VerbForm::kThirdSingular) == "watches");
  CHECK(m.inflect("cry", VerbForm::kThirdSingular) == "cries");
  CHECK(m.inflect("do", VerbForm::kThirdSingular) == "does");
  CHECK(m.inflect("have", VerbForm::kThirdSingular) == "has");
  CHECK(m.inflect("meet", VerbForm::kPast) == "met");
  CHECK(m.inflect("dance", VerbForm::kPast) == "danced");
  CHECK(m.inflect("stop", VerbForm::kPast) == "stopped");
  CHECK(m.inflect("taking", VerbForm::kBase) == "take");
  CHECK(m.inflect("was", VerbForm::kBase) == "be");
  CHECK(m.inflect("are", VerbForm::kBase) == "be");
}

TEST_CASE("lemmas for indexing") {
  const auto& m = Morphology::builtin();
  CHECK(m.word_lemma("selfie") == "selfie");
  CHECK(m.word_lemma("selfies") == "selfie");
  CHECK(m.word_lemma("Taking") == "take");
  CHECK(m.word_lemma("takes") == "take");
  CHECK(m.word_lemma("driving") == "drive");
  CHECK(m.word_lemma("men") == "man");
  CHECK(m.word_lemma("dancing") == "dance");
  CHECK(m.word_lemma("glass") == "glass");
  CHECK(m.word_lemma("the") == "the");
}

TEST_CASE("property: 3sg of a regular base appends s or es") {
  const auto& m = Morphology::builtin();
  const char* regular[] = {"play", "walk", "jump", "watch", "push", "fix",
                           "kiss", "cook", "dance", "climb", "wash", "buzz"};
  for (const char* v : regular) {
    std::string base = m.inflect(v, VerbForm::kBase);
    std::string s3 = m.inflect(base, VerbForm::kThirdSingular);
    const bool sibilant = base.ends_with("s") || base.ends_with("sh") ||
                          base.ends_with("ch") || base.ends_with("x") ||
                          base.ends_with("z") || base.ends_with("o");
    CHECK(s3 == base + (sibilant ? "es" : "s"));
  }
}

TEST_CASE("custom irregular table overrides") {
  std::istringstream in("swim\tswam\tswims\tswimming\n");
  auto table = IrregularVerbs::parse(in);
  Morphology m(Lexicon::builtin(), table);
  CHECK(m.inflect("swam", VerbForm::kBase) == "swim");
  CHECK(m.inflect("meet", VerbForm::kPast) == "meeted");
}
