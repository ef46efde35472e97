#include <sstream>

#include "doctest.h"
#include "negbench/common/error.hpp"
#include "negbench/query/repurpose.hpp"

using namespace negbench;
using namespace negbench::query;

namespace {

std::vector<CaptionRecord> train_corpus() {
  return {
      {"v1", "c1", "a man takes a selfie"},
      {"v1", "c2", "a man is smiling at the camera"},
      {"v2", "c3", "a man is taking a selfie and driving a car"},
      {"v3", "c4", "a man drives down a road"},
      {"v3", "c5", "a man is driving a car"},
      {"v4", "c6", "a woman cooks food in a kitchen"},
      {"v5", "c7", "a woman sings a song"},
      {"v5", "c8", "a woman is singing a song on a stage"},
      {"v6", "c9", "a woman cooks pasta"},
      {"v7", "c10", "kids play football in a park"},
      {"v8", "c11", "kids swim in a pool"},
      {"v8", "c12", "kids play in a pool"},
      {"v9", "c13", "a man plays a guitar"},
      {"v9", "c14", "a man sings a song"},
      {"t1", "c15", "a dog runs on the grass"},
      {"t2", "c16", "a girl is playing with a ball"},
      {"t3", "c17", "a boy running without a shirt"},
  };
}

std::map<std::string, std::string> splits() {
  std::map<std::string, std::string> s;
  for (int i = 1; i <= 9; ++i) s["v" + std::to_string(i)] = "train";
  for (int i = 1; i <= 3; ++i) s["t" + std::to_string(i)] = "test";
  return s;
}

}  // namespace

TEST_CASE("split manifest parsing") {
  std::istringstream in("v1\ttrain\nv2\ttest\n");
  auto m = read_split_manifest(in);
  CHECK(m.at("v2") == "test");
  std::istringstream conflict("v1\ttrain\nv1\ttest\n");
  CHECK_THROWS_AS(read_split_manifest(conflict), Error);
}

TEST_CASE("three captions with one verb each give three negated queries") {
  std::vector<CaptionRecord> caps = {{"a", "c1", "a man is running"},
                                     {"b", "c2", "a dog chases a ball"},
                                     {"c", "c3", "kids sitting on the floor"}};
  std::map<std::string, std::string> split = {{"a", "test"}, {"b", "test"}, {"c", "test"}};
  RepurposeConfig cfg;
  cfg.seed = 3;
  auto r = repurpose_dataset(caps, split, cfg);
  CHECK(r.original.size() == 3);
  REQUIRE(r.negated.size() == 3);
  CHECK(r.negated[0].text == "a man isn't running");
  CHECK(r.negated[1].text == "a dog does not chase a ball");
  CHECK(r.negated[2].text == "kids not sitting on the floor");
  for (const auto& q : r.negated) {
    q.validate();
    CHECK(q.known_negative_ids.size() == 1);
  }
}

TEST_CASE("bundle contents") {
  RepurposeConfig cfg;
  cfg.seed = 11;
  auto r = repurpose_dataset(train_corpus(), splits(), cfg);
  CHECK(r.stats.test_captions == 3);
  CHECK(r.original.size() == 3);
  CHECK(r.negated.size() == 3);
  CHECK(r.stats.negated_from_cue_removal == 1);
  CHECK(r.stats.captions_with_cues == 1);
  CHECK(r.stats.cue_prevalence() == doctest::Approx(1.0 / 17));
  for (const auto& q : r.negated) {
    if (q.origin_qid == "c17") CHECK(q.text == "a boy running with a shirt");
  }
  REQUIRE_FALSE(r.composed.empty());
  CHECK(r.stats.composed == r.composed.size());
  CHECK(r.stats.composed_before_dedup >= r.stats.composed);
  for (const auto& q : r.composed) {
    q.validate();
    CAPTURE(q.text);
    CHECK((q.text.find("not") != std::string::npos || q.text.find("n't") != std::string::npos));
  }
}

TEST_CASE("composed queries pass the brute-force audit") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    RepurposeConfig cfg;
    cfg.seed = seed;
    auto corpus = train_corpus();
    auto r = repurpose_dataset(corpus, splits(), cfg);
    std::vector<CaptionRecord> source;
    for (const auto& c : corpus) {
      if (c.video_id[0] == 'v') source.push_back(c);
    }
    auto idx = CaptionIndex::build(source);
    CHECK(audit_composed(r.composed, idx).empty());
    // Tampering is detected.
    if (!r.composed.empty()) {
      auto bad = r.composed;
      bad[0].relevant_ids.insert("v4");
      bad[0].relevant_ids.insert("v9");
      CHECK(audit_composed(bad, idx).size() == 1);
    }
  }
}

TEST_CASE("seeded output is reproducible") {
  RepurposeConfig cfg;
  cfg.seed = 99;
  auto a = repurpose_dataset(train_corpus(), splits(), cfg);
  auto b = repurpose_dataset(train_corpus(), splits(), cfg);
  CHECK(queries_to_jsonl(a.negated) == queries_to_jsonl(b.negated));
  CHECK(queries_to_jsonl(a.composed) == queries_to_jsonl(b.composed));
  CHECK(a.stats.to_json(99).dump() == b.stats.to_json(99).dump());
}

TEST_CASE("query JSON round trip") {
  Query q;
  q.qid = "x#comp0";
  q.kind = QueryKind::kComposed;
  q.text = "a man is taking selfie and not driving";
  q.relevant_ids = {"v1"};
  q.pos_subquery = "a man is taking selfie";
  q.neg_subquery = "he is driving";
  q.seed_trace = 1234567890123ULL;
  q.triplet = Triplet{"a man", "take selfie", "drive"};
  std::istringstream in(queries_to_jsonl(std::vector<Query>{q}));
  auto back = read_queries_jsonl(in);
  REQUIRE(back.size() == 1);
  CHECK(queries_to_jsonl(back) == queries_to_jsonl(std::vector<Query>{q}));
  std::istringstream missing(R"({"qid":"a","kind":"original"})" "\n");
  CHECK_THROWS_AS(read_queries_jsonl(missing), Error);
}
