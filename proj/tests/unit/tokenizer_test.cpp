#include <string>
#include <vector>

#include "doctest.h"
#include "negbench/common/error.hpp"
#include "negbench/common/rng.hpp"
#include "negbench/text/tokenizer.hpp"

using negbench::Errc;
using negbench::Error;
using negbench::text::detokenize;
using negbench::text::tokenize;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize splits contractions") {
  CHECK(tokenize("a man isn't running") ==
        Tokens{"a", "man", "is", "n't", "running"});
  CHECK(tokenize("he can't swim") == Tokens{"he", "ca", "n't", "swim"});
  CHECK(tokenize("the man's dog") == Tokens{"the", "man", "'s", "dog"});
}

TEST_CASE("tokenize splits on whitespace and punctuation") {
  CHECK(tokenize("kids sitting on the floor") ==
        Tokens{"kids", "sitting", "on", "the", "floor"});
  CHECK(tokenize("A dog, running.") == Tokens{"A", "dog", ",", "running", "."});
  CHECK(tokenize("each others' hair") == Tokens{"each", "others", "'", "hair"});
}

TEST_CASE("tokenize rejects empty captions") {
  for (const char* s : {"", "   ", "\t\n"}) {
    try {
      tokenize(s);
      FAIL("expected EmptyCaption");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kEmptyCaption);
    }
  }
}

TEST_CASE("detokenize reattaches clitics and punctuation") {
  CHECK(detokenize(Tokens{"a", "man", "is", "n't", "running"}) ==
        "a man isn't running");
  CHECK(detokenize(Tokens{"each", "others", "'", "hair"}) == "each others' hair");
  CHECK(detokenize(Tokens{"a", "dog", ",", "running", "."}) ==
        "a dog, running.");
}

TEST_CASE("retokenizing detokenized text is idempotent") {
  static const std::vector<std::string> kWords = {
      "a",   "man", "isn't", "running", ",",    "the", "dog's", "others'",
      "can't", "(", "big", ")", "won't", "play", ".", "they're", "kids"};
  negbench::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto n = 1 + rng.uniform_below(12);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (!text.empty()) text.push_back(' ');
      text += kWords[rng.uniform_below(kWords.size())];
    }
    const auto once = tokenize(text);
    CHECK(tokenize(detokenize(once)) == once);
  }
}
