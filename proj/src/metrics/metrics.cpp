#include "negbench/metrics/metrics.hpp"

#include <cmath>
#include <map>

#include "negbench/common/error.hpp"
#include "negbench/common/parallel.hpp"

namespace negbench::metrics {

namespace {

void require_truth(const std::set<std::string>& relevant) {
  if (relevant.empty()) throw Error(Errc::kNoGroundTruth, "query without relevant items");
}

// 1-based rank of the first relevant item, 0 when absent.
std::size_t best_rank(const Ranking& ranking, const std::set<std::string>& relevant) {
  for (std::size_t i = 0; i < ranking.items.size(); ++i) {
    if (relevant.count(ranking.items[i].id)) return i + 1;
  }
  return 0;
}

double round_to(double v, int places) {
  const double scale = std::pow(10.0, places);
  return std::round(v * scale) / scale;
}

nlohmann::ordered_json set_json(const SetMetrics& m) {
  nlohmann::ordered_json j;
  j["count"] = m.count;
  j["R1"] = round_to(100.0 * m.r1, 1);
  j["R5"] = round_to(100.0 * m.r5, 1);
  j["R10"] = round_to(100.0 * m.r10, 1);
  j["MIR"] = round_to(m.mir, 3);
  j["raw"] = {{"R1", m.r1}, {"R5", m.r5}, {"R10", m.r10}, {"MIR", m.mir}};
  return j;
}

}  // namespace

int recall_at_n(const Ranking& ranking, const std::set<std::string>& relevant, std::size_t n) {
  require_truth(relevant);
  if (n == 0) throw Error(Errc::kInvalidArgument, "recall cutoff must be at least 1");
  const std::size_t r = best_rank(ranking, relevant);
  return r != 0 && r <= n ? 1 : 0;
}

double inverted_rank(const Ranking& ranking, const std::set<std::string>& relevant) {
  require_truth(relevant);
  const std::size_t r = best_rank(ranking, relevant);
  return r == 0 ? 0.0 : 1.0 / static_cast<double>(r);
}

SetMetrics aggregate(std::span<const Judged> judged) {
  struct PerQuery {
    int h1, h5, h10;
    double ir;
  };
  std::vector<PerQuery> per(judged.size());
  parallel_for(judged.size(), [&](std::size_t i) {
    const auto& j = judged[i];
    per[i] = {recall_at_n(*j.ranking, *j.relevant, 1), recall_at_n(*j.ranking, *j.relevant, 5),
              recall_at_n(*j.ranking, *j.relevant, 10), inverted_rank(*j.ranking, *j.relevant)};
  });
  SetMetrics m;
  m.count = judged.size();
  if (judged.empty()) return m;
  double h1 = 0, h5 = 0, h10 = 0, ir = 0;
  for (const auto& p : per) {
    h1 += p.h1;
    h5 += p.h5;
    h10 += p.h10;
    ir += p.ir;
  }
  const auto n = static_cast<double>(judged.size());
  m.r1 = h1 / n;
  m.r5 = h5 / n;
  m.r10 = h10 / n;
  m.mir = ir / n;
  return m;
}

DeltaMetrics delta_metrics(const SetMetrics& origin, const SetMetrics& negated) {
  DeltaMetrics d;
  d.origin = origin;
  d.negated = negated;
  d.d_r1 = origin.r1 - negated.r1;
  d.d_r5 = origin.r5 - negated.r5;
  d.d_r10 = origin.r10 - negated.r10;
  d.d_mir = origin.mir - negated.mir;
  return d;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "negbench-report/1";
  auto& sets = j["sets"] = nlohmann::ordered_json::object();
  if (original) sets["original"] = set_json(*original);
  if (negated) {
    auto& n = sets["negated"];
    n["count"] = negated->negated.count;
    n["dR1"] = round_to(100.0 * negated->d_r1, 1);
    n["dR5"] = round_to(100.0 * negated->d_r5, 1);
    n["dR10"] = round_to(100.0 * negated->d_r10, 1);
    n["dMIR"] = round_to(negated->d_mir, 3);
    n["raw"] = {{"dR1", negated->d_r1},
                {"dR5", negated->d_r5},
                {"dR10", negated->d_r10},
                {"dMIR", negated->d_mir}};
    n["origin"] = set_json(negated->origin);
    n["negated"] = set_json(negated->negated);
  }
  if (composed) sets["composed"] = set_json(*composed);
  j["config"] = config.is_null() ? nlohmann::ordered_json::object() : config;
  return j;
}

EvalReport evaluate(std::span<const query::Query> queries, std::span<const Ranking> rankings) {
  std::map<std::string_view, const Ranking*> by_qid;
  for (const auto& r : rankings) by_qid.emplace(r.qid, &r);
  std::map<std::string_view, const query::Query*> query_by_qid;
  for (const auto& q : queries) query_by_qid.emplace(q.qid, &q);

  std::vector<std::string> missing;
  for (const auto& q : queries) {
    if (!by_qid.count(q.qid)) missing.push_back(q.qid);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      list += (i ? ", " : "") + missing[i];
    }
    if (missing.size() > 20) list += ", ...";
    throw Error(Errc::kMissingRanking,
                std::to_string(missing.size()) + " queries have no ranking: " + list);
  }

  std::vector<Judged> original, composed, origin_pairs, negated;
  for (const auto& q : queries) {
    const Ranking* r = by_qid.at(q.qid);
    switch (q.kind) {
      case query::QueryKind::kOriginal:
        original.push_back({r, &q.relevant_ids});
        break;
      case query::QueryKind::kComposed:
        composed.push_back({r, &q.relevant_ids});
        break;
      case query::QueryKind::kNegated: {
        auto o = q.origin_qid ? query_by_qid.find(*q.origin_qid) : query_by_qid.end();
        if (o == query_by_qid.end()) {
          throw Error(Errc::kMissingOrigin, "negated query " + q.qid + " has no origin " +
                                                q.origin_qid.value_or("(unset)"));
        }
        const auto& target = o->second->relevant_ids;
        origin_pairs.push_back({by_qid.at(o->second->qid), &target});
        negated.push_back({r, &target});
        break;
      }
    }
  }
  EvalReport report;
  if (!original.empty()) report.original = aggregate(original);
  if (!composed.empty()) report.composed = aggregate(composed);
  if (!negated.empty()) report.negated = delta_metrics(aggregate(origin_pairs), aggregate(negated));
  return report;
}

}  // namespace negbench::metrics
