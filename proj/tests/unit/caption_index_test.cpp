#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "negbench/common/error.hpp"
#include "negbench/common/rng.hpp"
#include "negbench/query/caption_index.hpp"

using namespace negbench;
using namespace negbench::query;

namespace {

const std::vector<CaptionRecord> kToy = {
    {"v1", "c1", "a man takes a selfie"},
    {"v2", "c2", "man taking selfie while driving a car"},
    {"v3", "c3", "a woman drives down a road"},
    {"v4", "c4", "a dog runs in a park"},
};

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::kIo;
}

}  // namespace

TEST_CASE("captions TSV parsing") {
  std::istringstream in("v1\tc1\ta man runs\n\nv2\tc2\ta dog\n");
  auto recs = read_captions_tsv(in);
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].video_id == "v2");
  CHECK(recs[1].text == "a dog");
  std::istringstream bad("v1\ta man runs\n");
  CHECK(code_of([&] { read_captions_tsv(bad); }) == Errc::kParse);
}

TEST_CASE("index construction and errors") {
  std::vector<CaptionRecord> two = {{"v1", "c1", "a man takes a selfie"},
                                    {"v2", "c2", "a dog barks"}};
  auto idx = CaptionIndex::build(two);
  CHECK(idx.videos_with("selfie") == std::set<std::string>{"v1"});
  CHECK(idx.videos_with("take") == std::set<std::string>{"v1"});
  CHECK(idx.videos_with("a").empty());
  CHECK(code_of([] { CaptionIndex::build({}); }) == Errc::kEmptyCorpus);
  std::vector<CaptionRecord> dup = {{"v1", "c1", "x"}, {"v2", "c1", "y"}};
  CHECK(code_of([&] { CaptionIndex::build(dup); }) == Errc::kDuplicateId);
}

TEST_CASE("content lemmas drop stopwords and lemmatize") {
  auto idx = CaptionIndex::build(kToy);
  CHECK(idx.content_lemmas("drive down a road") == std::vector<std::string>{"drive", "road"});
  CHECK(idx.content_lemmas("is taking a selfie") == std::vector<std::string>{"take", "selfie"});
  CHECK(idx.content_lemmas("the dogs were not running") ==
        std::vector<std::string>{"dog", "run"});
}

TEST_CASE("matched videos on the toy corpus") {
  auto idx = CaptionIndex::build(kToy);
  auto m = find_matched_videos("take selfie", "drive down a road", idx);
  CHECK(m.relevant == std::set<std::string>{"v1"});
  CHECK(m.positives == std::set<std::string>{"v1", "v2"});
  CHECK(std::includes(m.negatives.begin(), m.negatives.end(), m.positives.begin(),
                      std::next(m.positives.begin(), 0)));
  CHECK(m.negatives.count("v2") == 1);
  CHECK(m.negatives.count("v3") == 1);

  CHECK(code_of([&] { find_matched_videos("play chess", "drive", idx); }) ==
        Errc::kEmptyMatch);
  CHECK(code_of([&] { find_matched_videos("take selfie", "selfie", idx); }) ==
        Errc::kEmptyMatch);
  // Order matters for phrases.
  const std::vector<std::string> reversed = {"selfie", "take"};
  CHECK(idx.phrase_match(reversed).empty());
}

TEST_CASE("phrase and word matching agree with a linear scan") {
  const std::vector<std::string> vocab = {
      "man", "woman", "dog", "ball", "car", "road", "guitar", "play", "run",
      "drive", "sing", "song", "kitchen", "cook", "food", "eat"};
  const std::vector<std::string> fillers = {"a", "the", "is", "on", "with", "and"};
  Rng rng(2024);
  std::vector<CaptionRecord> corpus;
  for (int i = 0; i < 100; ++i) {
    std::string text;
    const auto len = 3 + rng.uniform_below(6);
    for (std::uint64_t k = 0; k < len; ++k) {
      const bool filler = rng.uniform01() < 0.3;
      const auto& pool = filler ? fillers : vocab;
      text += (k ? " " : "") + pool[rng.uniform_below(pool.size())];
    }
    corpus.push_back({"v" + std::to_string(i % 40), "c" + std::to_string(i), text});
  }
  auto idx = CaptionIndex::build(corpus);

  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> phrase;
    const auto len = 1 + rng.uniform_below(3);
    if (trial % 2 == 0) {
      // Take a real sub-sequence so that matches exist.
      const auto& lemmas = idx.caption_lemmas(rng.uniform_below(idx.caption_count()));
      if (lemmas.empty()) continue;
      const auto start = rng.uniform_below(lemmas.size());
      for (auto k = start; k < std::min<std::size_t>(lemmas.size(), start + len); ++k) {
        phrase.push_back(lemmas[k]);
      }
    } else {
      for (std::uint64_t k = 0; k < len; ++k) {
        phrase.push_back(vocab[rng.uniform_below(vocab.size())]);
      }
    }
    std::set<std::string> phrase_oracle, word_oracle;
    for (std::size_t c = 0; c < idx.caption_count(); ++c) {
      const auto& l = idx.caption_lemmas(c);
      for (std::size_t s = 0; s + phrase.size() <= l.size(); ++s) {
        if (std::equal(phrase.begin(), phrase.end(), l.begin() + s)) {
          phrase_oracle.insert(idx.caption(c).video_id);
        }
      }
      for (const auto& w : l) {
        if (std::find(phrase.begin(), phrase.end(), w) != phrase.end()) {
          word_oracle.insert(idx.caption(c).video_id);
        }
      }
    }
    CHECK(idx.phrase_match(phrase) == phrase_oracle);
    CHECK(idx.word_match(phrase) == word_oracle);
  }
}
