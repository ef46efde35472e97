#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negbench/metrics/metrics.hpp"
#include "negbench/neglearn/synthetic.hpp"
#include "negbench/neglearn/trainer.hpp"
#include "negbench/query/query.hpp"
#include "negbench/retrieval/feature_store.hpp"
#include "negbench/retrieval/ranking.hpp"

namespace negbench::neglearn {

// Rows of `store` for `ids`, in that order.
retrieval::FeatureStore subset(const retrieval::FeatureStore& store,
                               const std::vector<std::string>& ids);

// Videos whose split equals `split`, in id order.
std::vector<std::string> videos_in_split(const std::map<std::string, std::string>& splits,
                                         const std::string& split);

// Original queries of `split` paired with their (single) relevant video.
// Negated features are attached when `negtexts` is given and holds the qid.
TrainData make_train_data(std::span<const query::Query> queries,
                          const retrieval::FeatureStore& texts,
                          const retrieval::FeatureStore* negtexts,
                          const retrieval::FeatureStore& videos, const std::string& split);

ValSet make_val_set(std::span<const query::Query> queries, const retrieval::FeatureStore& texts,
                    const retrieval::FeatureStore& videos,
                    const std::vector<std::string>& gallery, const std::string& split);

// Queries whose split is `split` (or unset when `split` is empty).
std::vector<query::Query> queries_in_split(std::span<const query::Query> queries,
                                           const std::string& split);

// Cosine rankings of every query against the gallery, through the encoder
// when one is given.
std::vector<retrieval::Ranking> rank_queries(std::span<const query::Query> queries,
                                             const retrieval::FeatureStore& texts,
                                             const retrieval::FeatureStore& gallery,
                                             const DualEncoder* encoder,
                                             std::optional<std::size_t> k = std::nullopt);

// Boolean re-ranking for negated and composed queries using "<qid>#pos" and
// "<qid>#neg" subquery features; original queries, and any query lacking
// either subquery feature, are ranked plainly.
std::vector<retrieval::Ranking> boolean_rank_queries(std::span<const query::Query> queries,
                                                     const retrieval::FeatureStore& texts,
                                                     const retrieval::FeatureStore& subqueries,
                                                     const retrieval::FeatureStore& gallery,
                                                     const DualEncoder* encoder,
                                                     std::optional<std::size_t> k = std::nullopt);

struct BenchmarkRun {
  TrainResult training;
  metrics::EvalReport plain;
  metrics::EvalReport boolean;
};

// Trains on the benchmark's train split (validating on val) and evaluates
// the test queries with and without boolean re-ranking.
BenchmarkRun run_on_benchmark(const SynthBenchmark& bench, const TrainConfig& config);

// Hyperparameter grid: `key = v1, v2, ...` lines giving the cartesian
// product of the listed values over a base config. A `---` line starts a new
// block; the blocks' products are concatenated.
std::vector<TrainConfig> expand_grid(std::istream& in, const TrainConfig& base);
// Default grid over the loss weight and the upper boundaries.
std::string default_grid();

}  // namespace negbench::neglearn
