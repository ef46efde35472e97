#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "negbench/query/query.hpp"
#include "negbench/retrieval/ranking.hpp"

namespace negbench::metrics {

using retrieval::Ranking;

// 1 when any relevant id is among the first n items. Throws
// Error(kNoGroundTruth) for an empty relevant set, Error(kInvalidArgument)
// for n == 0.
int recall_at_n(const Ranking& ranking, const std::set<std::string>& relevant, std::size_t n);

// 1 / (1-based rank of the best relevant item); 0 when none is ranked.
double inverted_rank(const Ranking& ranking, const std::set<std::string>& relevant);

// Aggregates over a query set. Recalls are fractions in [0, 1].
struct SetMetrics {
  std::size_t count = 0;
  double r1 = 0.0;
  double r5 = 0.0;
  double r10 = 0.0;
  double mir = 0.0;
};

struct Judged {
  const Ranking* ranking;
  const std::set<std::string>* relevant;
};

SetMetrics aggregate(std::span<const Judged> judged);

struct DeltaMetrics {
  SetMetrics origin;   // origins of the negated queries, one per pair
  SetMetrics negated;  // negated queries against their origin's videos
  double d_r1 = 0.0;   // origin minus negated, as fractions
  double d_r5 = 0.0;
  double d_r10 = 0.0;
  double d_mir = 0.0;
};

DeltaMetrics delta_metrics(const SetMetrics& origin, const SetMetrics& negated);

struct EvalReport {
  std::optional<SetMetrics> original;
  std::optional<DeltaMetrics> negated;
  std::optional<SetMetrics> composed;
  nlohmann::ordered_json config;  // echoed verbatim

  nlohmann::ordered_json to_json() const;
};

// Evaluates every query of the file against its ranking. Original and
// composed queries are scored against their own relevant ids; each negated
// query is scored against its origin's relevant ids, paired with the
// origin's own score. Throws Error(kMissingRanking) listing the qids without
// a ranking and Error(kMissingOrigin) for unresolvable origins.
EvalReport evaluate(std::span<const query::Query> queries, std::span<const Ranking> rankings);

}  // namespace negbench::metrics
