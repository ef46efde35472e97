#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negbench/retrieval/feature_store.hpp"

namespace negbench::retrieval {

struct ScoredItem {
  std::string id;
  double score = 0.0;
};

// Scores non-increasing; equal scores ordered by ascending id.
struct Ranking {
  std::string qid;
  std::vector<ScoredItem> items;
};

// dot(a, b) / (|a| |b|), accumulated in double. Throws Error(kZeroNorm) or
// Error(kDimMismatch).
double cosine(std::span<const float> a, std::span<const float> b);

// Cosine ranking of every stored item, truncated to k when given.
Ranking rank(std::span<const float> query, const FeatureStore& store,
             std::optional<std::size_t> k = std::nullopt, std::string qid = {});

// score(x) = cos(x, pos) - cos(x, neg); without `neg` this is rank().
Ranking boolean_rerank(std::span<const float> pos, std::optional<std::span<const float>> neg,
                       const FeatureStore& store,
                       std::optional<std::size_t> k = std::nullopt, std::string qid = {});

// Sorts by descending score, ascending id.
void sort_ranking(std::vector<ScoredItem>& items, std::optional<std::size_t> k = std::nullopt);

// JSONL `{"qid": ..., "items": [{"id": ..., "score": ...}, ...]}`.
std::string rankings_to_jsonl(std::span<const Ranking> rankings);
std::vector<Ranking> read_rankings_jsonl(std::istream& in);
std::vector<Ranking> read_rankings_file(const std::string& path);

}  // namespace negbench::retrieval
