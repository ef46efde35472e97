#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "negbench/query/query.hpp"
#include "negbench/retrieval/feature_store.hpp"

namespace negbench::neglearn {

// A desk-scale stand-in for a captioned video collection. Each video shows
// one subject concept and a few action concepts; its feature is the sum of
// the concepts' visual vectors plus noise. A caption mentions the subject
// and a non-empty subset of the actions. Text features have two blocks:
// a bag of word vectors for every mentioned concept, and a negation block
// holding the word vectors of negated concepts. Negating a concept keeps its
// word in the bag, as "not running" still contains "running".
struct SynthConfig {
  std::size_t subjects = 8;
  std::size_t actions = 16;
  std::size_t actions_per_video = 2;
  std::size_t train_videos = 600;
  std::size_t val_videos = 150;
  std::size_t test_videos = 300;
  std::size_t captions_per_video = 2;
  std::size_t composed = 200;
  std::size_t video_dim = 32;
  std::size_t word_dim = 24;
  double video_noise = 0.15;
  double text_noise = 0.1;

  void validate() const;
  void set(const std::string& key, const std::string& value);
  nlohmann::ordered_json to_json() const;
};

struct SynthBenchmark {
  SynthConfig config;
  std::uint64_t seed = 0;
  retrieval::FeatureStore videos;      // every video
  retrieval::FeatureStore texts;       // captions and test queries, by qid
  retrieval::FeatureStore negtexts;    // negated caption per caption qid
  retrieval::FeatureStore subqueries;  // "<qid>#pos" / "<qid>#neg"
  std::vector<query::Query> queries;   // train/val/test originals, test negated and composed
  std::map<std::string, std::string> splits;              // video -> split
  std::map<std::string, std::set<std::string>> concepts;  // video -> concept names
};

SynthBenchmark generate_synthetic_benchmark(std::uint64_t seed, const SynthConfig& config = {});

// Relevant videos of a composed query: subject and positive action present,
// negative action absent. Exhaustive over the test split.
std::set<std::string> composed_ground_truth(const SynthBenchmark& bench,
                                            const std::string& subject,
                                            const std::string& pos_action,
                                            const std::string& neg_action);

// videos.nbf, texts.nbf, negtexts.nbf, subqueries.nbf (each with .ids.tsv),
// queries.jsonl, splits.tsv and benchmark.json. Returns the paths written.
std::vector<std::filesystem::path> write_synthetic_benchmark(const SynthBenchmark& bench,
                                                             const std::filesystem::path& dir);

// Reads a directory in the layout above. Any data set converted to it (with
// "<qid>#pos"/"<qid>#neg" subquery features and split-tagged queries) can be
// trained and evaluated like the synthetic one; benchmark.json is optional.
SynthBenchmark load_benchmark_dir(const std::filesystem::path& dir);

}  // namespace negbench::neglearn
