#include "negbench/neglearn/experiment.hpp"

#include <sstream>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"

namespace negbench::neglearn {

using retrieval::FeatureStore;

FeatureStore subset(const FeatureStore& store, const std::vector<std::string>& ids) {
  retrieval::Matrix m(static_cast<Eigen::Index>(ids.size()),
                      static_cast<Eigen::Index>(store.dim()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) =
        store.matrix().row(static_cast<Eigen::Index>(store.index_of(ids[i])));
  }
  return FeatureStore(ids, std::move(m));
}

std::vector<std::string> videos_in_split(const std::map<std::string, std::string>& splits,
                                         const std::string& split) {
  std::vector<std::string> out;
  for (const auto& [vid, s] : splits) {
    if (s == split) out.push_back(vid);
  }
  return out;
}

std::vector<query::Query> queries_in_split(std::span<const query::Query> queries,
                                           const std::string& split) {
  std::vector<query::Query> out;
  for (const auto& q : queries) {
    if (split.empty() ? !q.split.has_value() : q.split == split) out.push_back(q);
  }
  return out;
}

TrainData make_train_data(std::span<const query::Query> queries, const FeatureStore& texts,
                          const FeatureStore* negtexts, const FeatureStore& videos,
                          const std::string& split) {
  std::vector<const query::Query*> picked;
  for (const auto& q : queries) {
    if (q.kind == query::QueryKind::kOriginal && q.split == split) picked.push_back(&q);
  }
  if (picked.empty()) {
    throw Error(Errc::kInvalidArgument, "no original queries in split '" + split + "'");
  }
  std::map<std::string, int> video_row;
  std::vector<std::string> video_ids;
  TrainData d;
  const auto n = static_cast<Eigen::Index>(picked.size());
  d.text.resize(n, static_cast<Eigen::Index>(texts.dim()));
  d.negtext = MatrixXd::Zero(n, static_cast<Eigen::Index>(texts.dim()));
  d.has_neg.assign(picked.size(), false);
  if (negtexts && negtexts->dim() != texts.dim()) {
    throw Error(Errc::kDimMismatch, "negated and caption features differ in dimension");
  }
  for (std::size_t i = 0; i < picked.size(); ++i) {
    const auto& q = *picked[i];
    if (q.relevant_ids.size() != 1) {
      throw Error(Errc::kInvalidArgument, "training query " + q.qid + " must name one video");
    }
    const auto& vid = *q.relevant_ids.begin();
    auto [it, inserted] = video_row.emplace(vid, static_cast<int>(video_ids.size()));
    if (inserted) video_ids.push_back(vid);
    d.video_of.push_back(it->second);
    const auto row = texts.matrix().row(static_cast<Eigen::Index>(texts.index_of(q.qid)));
    d.text.row(static_cast<Eigen::Index>(i)) = row.cast<double>();
    if (negtexts && negtexts->contains(q.qid)) {
      d.negtext.row(static_cast<Eigen::Index>(i)) =
          negtexts->matrix().row(static_cast<Eigen::Index>(negtexts->index_of(q.qid))).cast<double>();
      d.has_neg[i] = true;
    }
  }
  d.videos = to_double(subset(videos, video_ids).matrix());
  return d;
}

ValSet make_val_set(std::span<const query::Query> queries, const FeatureStore& texts,
                    const FeatureStore& videos, const std::vector<std::string>& gallery,
                    const std::string& split) {
  ValSet v;
  std::map<std::string, int> row;
  for (std::size_t i = 0; i < gallery.size(); ++i) row[gallery[i]] = static_cast<int>(i);
  std::vector<const query::Query*> picked;
  for (const auto& q : queries) {
    if (q.kind == query::QueryKind::kOriginal && q.split == split) picked.push_back(&q);
  }
  v.text.resize(static_cast<Eigen::Index>(picked.size()), static_cast<Eigen::Index>(texts.dim()));
  for (std::size_t i = 0; i < picked.size(); ++i) {
    v.text.row(static_cast<Eigen::Index>(i)) =
        texts.matrix().row(static_cast<Eigen::Index>(texts.index_of(picked[i]->qid))).cast<double>();
    std::vector<int> rel;
    for (const auto& id : picked[i]->relevant_ids) {
      if (auto it = row.find(id); it != row.end()) rel.push_back(it->second);
    }
    v.relevant.push_back(std::move(rel));
  }
  v.gallery = to_double(subset(videos, gallery).matrix());
  return v;
}

namespace {

// Query-side store restricted to `ids`, embedded when an encoder is given.
FeatureStore query_side(const FeatureStore& texts, const std::vector<std::string>& ids,
                        const DualEncoder* encoder) {
  auto s = subset(texts, ids);
  return encoder ? encoder->embed_texts(s) : s;
}

}  // namespace

std::vector<retrieval::Ranking> rank_queries(std::span<const query::Query> queries,
                                             const FeatureStore& texts, const FeatureStore& gallery,
                                             const DualEncoder* encoder,
                                             std::optional<std::size_t> k) {
  std::vector<std::string> ids;
  for (const auto& q : queries) ids.push_back(q.qid);
  const auto qs = query_side(texts, ids, encoder);
  const auto g = encoder ? encoder->embed_videos(gallery) : gallery;
  std::vector<retrieval::Ranking> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out.push_back(retrieval::rank(qs.row(i), g, k, ids[i]));
  return out;
}

std::vector<retrieval::Ranking> boolean_rank_queries(std::span<const query::Query> queries,
                                                     const FeatureStore& texts,
                                                     const FeatureStore& subqueries,
                                                     const FeatureStore& gallery,
                                                     const DualEncoder* encoder,
                                                     std::optional<std::size_t> k) {
  // Queries without both subquery features (originals, negated captions whose
  // cue was removed) are ranked plainly.
  auto split = [&](const query::Query& q) {
    return q.kind != query::QueryKind::kOriginal && subqueries.contains(q.qid + "#pos") &&
           subqueries.contains(q.qid + "#neg");
  };
  std::vector<std::string> plain_ids, sub_ids;
  for (const auto& q : queries) {
    if (split(q)) {
      sub_ids.push_back(q.qid + "#pos");
      sub_ids.push_back(q.qid + "#neg");
    } else {
      plain_ids.push_back(q.qid);
    }
  }
  const auto plain = query_side(texts, plain_ids, encoder);
  const auto subs = query_side(subqueries, sub_ids, encoder);
  const auto g = encoder ? encoder->embed_videos(gallery) : gallery;
  std::vector<retrieval::Ranking> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    if (split(q)) {
      out.push_back(retrieval::boolean_rerank(subs.row(q.qid + "#pos"),
                                              subs.row(q.qid + "#neg"), g, k, q.qid));
    } else {
      out.push_back(retrieval::rank(plain.row(q.qid), g, k, q.qid));
    }
  }
  return out;
}

BenchmarkRun run_on_benchmark(const SynthBenchmark& bench, const TrainConfig& config) {
  const auto data = make_train_data(bench.queries, bench.texts,
                                    needs_negatives(config.aux) ? &bench.negtexts : nullptr,
                                    bench.videos, "train");
  const auto val = make_val_set(bench.queries, bench.texts, bench.videos,
                                videos_in_split(bench.splits, "val"), "val");
  BenchmarkRun run;
  run.training = train(data, config, [&](const DualEncoder& e) { return validation_mir(e, val); });

  const auto test = queries_in_split(bench.queries, "test");
  const auto gallery = subset(bench.videos, videos_in_split(bench.splits, "test"));
  const auto plain = rank_queries(test, bench.texts, gallery, &run.training.encoder);
  const auto boolean =
      boolean_rank_queries(test, bench.texts, bench.subqueries, gallery, &run.training.encoder);
  run.plain = metrics::evaluate(test, plain);
  run.boolean = metrics::evaluate(test, boolean);
  run.plain.config = run.boolean.config = config.to_json();
  return run;
}

namespace {

std::vector<TrainConfig> expand_block(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& axes,
    const TrainConfig& base) {
  std::vector<TrainConfig> out{base};
  for (const auto& [key, values] : axes) {
    std::vector<TrainConfig> next;
    for (const auto& cfg : out) {
      for (const auto& v : values) {
        TrainConfig c = cfg;
        c.set(key, v);
        next.push_back(c);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<TrainConfig> expand_grid(std::istream& in, const TrainConfig& base) {
  std::vector<TrainConfig> out;
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  auto flush = [&] {
    if (axes.empty()) return;
    for (auto& c : expand_block(axes, base)) out.push_back(std::move(c));
    axes.clear();
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body == "---") {
      flush();
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kParse, "grid line " + std::to_string(lineno) + ": expected key = v1, v2");
    }
    std::vector<std::string> values;
    std::string rest(body.substr(eq + 1));
    std::istringstream vs(rest);
    for (std::string v; std::getline(vs, v, ',');) {
      if (!trim(v).empty()) values.emplace_back(trim(v));
    }
    if (values.empty()) {
      throw Error(Errc::kParse, "grid line " + std::to_string(lineno) + ": no values");
    }
    axes.emplace_back(std::string(trim(body.substr(0, eq))), std::move(values));
  }
  flush();
  if (out.empty()) out.push_back(base);
  return out;
}

std::string default_grid() {
  return "aux = snl_video\n"
         "lambda1 = 0.001, 0.01\n"
         "---\n"
         "aux = bcl_video\n"
         "lambda2 = 0.001, 0.01\n"
         "m2 = 0.2, 0.3, 0.6, 0.9\n"
         "---\n"
         "aux = bcl_query\n"
         "lambda2 = 0.001, 0.01\n"
         "m4 = 0.2, 0.3, 0.6, 0.9\n";
}

}  // namespace negbench::neglearn
