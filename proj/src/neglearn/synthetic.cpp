#include "negbench/neglearn/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "negbench/common/error.hpp"
#include "negbench/common/rng.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/query/repurpose.hpp"

namespace negbench::neglearn {

using retrieval::FeatureStore;
using retrieval::Matrix;

void SynthConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(Errc::kInvalidArgument, why); };
  if (subjects == 0 || actions < 2 || actions_per_video == 0) fail("concept counts must be positive");
  if (actions_per_video > actions) fail("actions_per_video exceeds actions");
  if (train_videos < 2 || val_videos == 0 || test_videos == 0) fail("split sizes must be positive");
  if (captions_per_video == 0) fail("captions_per_video must be positive");
  if (video_dim == 0 || word_dim == 0) fail("feature dims must be positive");
  if (video_noise < 0 || text_noise < 0) fail("noise must be non-negative");
}

void SynthConfig::set(const std::string& key, const std::string& value) {
  auto count = [&] {
    try {
      std::size_t used = 0;
      auto n = std::stoull(value, &used);
      if (used == value.size()) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw Error(Errc::kParse, "synth '" + key + "': not an integer: " + value);
  };
  auto real = [&] {
    try {
      std::size_t used = 0;
      double d = std::stod(value, &used);
      if (used == value.size()) return d;
    } catch (const std::exception&) {
    }
    throw Error(Errc::kParse, "synth '" + key + "': not a number: " + value);
  };
  if (key == "subjects") subjects = count();
  else if (key == "actions") actions = count();
  else if (key == "actions_per_video") actions_per_video = count();
  else if (key == "train_videos") train_videos = count();
  else if (key == "val_videos") val_videos = count();
  else if (key == "test_videos") test_videos = count();
  else if (key == "captions_per_video") captions_per_video = count();
  else if (key == "composed") composed = count();
  else if (key == "video_dim") video_dim = count();
  else if (key == "word_dim") word_dim = count();
  else if (key == "video_noise") video_noise = real();
  else if (key == "text_noise") text_noise = real();
  else throw Error(Errc::kParse, "unknown synth key '" + key + "'");
}

nlohmann::ordered_json SynthConfig::to_json() const {
  return {{"subjects", subjects},
          {"actions", actions},
          {"actions_per_video", actions_per_video},
          {"train_videos", train_videos},
          {"val_videos", val_videos},
          {"test_videos", test_videos},
          {"captions_per_video", captions_per_video},
          {"composed", composed},
          {"video_dim", video_dim},
          {"word_dim", word_dim},
          {"video_noise", video_noise},
          {"text_noise", text_noise}};
}

namespace {

std::vector<double> unit_vector(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  double n = 0;
  for (auto& x : v) {
    x = rng.normal();
    n += x * x;
  }
  n = std::sqrt(n);
  for (auto& x : v) x /= n;
  return v;
}

struct Video {
  std::string id;
  std::string split;
  std::size_t subject;
  std::vector<std::size_t> actions;
};

// Rows accumulated in insertion order, turned into a FeatureStore at the end.
struct StoreBuilder {
  std::size_t dim;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;

  void add(std::string id, std::vector<double> row) {
    ids.push_back(std::move(id));
    rows.push_back(std::move(row));
  }
  FeatureStore build() const {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            static_cast<float>(rows[i][k]);
      }
    }
    return FeatureStore(ids, std::move(m));
  }
};

std::string subject_name(std::size_t s) { return fmt::format("s{}", s); }
std::string action_name(std::size_t a) { return fmt::format("a{}", a); }

}  // namespace

SynthBenchmark generate_synthetic_benchmark(std::uint64_t seed, const SynthConfig& config) {
  config.validate();
  SynthBenchmark b;
  b.config = config;
  b.seed = seed;
  const std::size_t dv = config.video_dim, dw = config.word_dim, dt = 2 * dw;
  const std::size_t n_concepts = config.subjects + config.actions;

  // Concepts 0..subjects-1 are subjects, the rest actions.
  Rng concept_rng(derive_seed(seed, "synth/concepts"));
  std::vector<std::vector<double>> visual, word;
  for (std::size_t c = 0; c < n_concepts; ++c) visual.push_back(unit_vector(concept_rng, dv));
  for (std::size_t c = 0; c < n_concepts; ++c) word.push_back(unit_vector(concept_rng, dw));
  auto action_concept = [&](std::size_t a) { return config.subjects + a; };

  Rng video_rng(derive_seed(seed, "synth/videos"));
  std::vector<Video> videos;
  const std::pair<const char*, std::size_t> splits[] = {
      {"train", config.train_videos}, {"val", config.val_videos}, {"test", config.test_videos}};
  StoreBuilder video_store{dv, {}, {}};
  for (const auto& [split, count] : splits) {
    for (std::size_t i = 0; i < count; ++i) {
      Video v;
      v.id = fmt::format("vid{:05d}", videos.size());
      v.split = split;
      v.subject = video_rng.uniform_below(config.subjects);
      std::vector<std::size_t> pool(config.actions);
      for (std::size_t a = 0; a < pool.size(); ++a) pool[a] = a;
      video_rng.shuffle(pool);
      v.actions.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(config.actions_per_video));
      std::sort(v.actions.begin(), v.actions.end());

      std::vector<double> x(dv, 0.0);
      auto add = [&](const std::vector<double>& u) {
        for (std::size_t k = 0; k < dv; ++k) x[k] += u[k];
      };
      add(visual[v.subject]);
      for (auto a : v.actions) add(visual[action_concept(a)]);
      for (auto& e : x) e += config.video_noise * video_rng.normal();
      video_store.add(v.id, std::move(x));

      b.splits[v.id] = v.split;
      auto& names = b.concepts[v.id];
      names.insert(subject_name(v.subject));
      for (auto a : v.actions) names.insert(action_name(a));
      videos.push_back(std::move(v));
    }
  }

  // Text rows: [bag | negation block].
  auto text_row = [&](std::size_t subject, const std::vector<std::size_t>& bag_actions,
                      const std::vector<std::size_t>& negated, bool with_subject,
                      const std::vector<double>& noise) {
    std::vector<double> t(dt, 0.0);
    auto add = [&](std::size_t c, std::size_t offset) {
      for (std::size_t k = 0; k < dw; ++k) t[offset + k] += word[c][k];
    };
    if (with_subject) add(subject, 0);
    for (auto a : bag_actions) add(action_concept(a), 0);
    for (auto a : negated) add(action_concept(a), dw);
    for (std::size_t k = 0; k < dw; ++k) t[k] += noise[k];
    return t;
  };
  auto noise_vec = [&](Rng& rng) {
    std::vector<double> n(dw);
    for (auto& e : n) e = config.text_noise * rng.normal();
    return n;
  };

  StoreBuilder texts{dt, {}, {}}, negtexts{dt, {}, {}}, subq{dt, {}, {}};
  Rng caption_rng(derive_seed(seed, "synth/captions"));
  std::size_t caption_no = 0;
  std::vector<query::Query> originals, negated;
  for (const auto& v : videos) {
    for (std::size_t c = 0; c < config.captions_per_video; ++c) {
      // Non-empty subset of the video's actions.
      std::vector<std::size_t> said;
      while (said.empty()) {
        for (auto a : v.actions) {
          if (caption_rng.uniform01() < 0.6) said.push_back(a);
        }
      }
      const std::size_t neg_pick = said[caption_rng.uniform_below(said.size())];
      const auto noise = noise_vec(caption_rng);
      const std::string qid = fmt::format("cap{:05d}", caption_no++);

      std::string text = subject_name(v.subject);
      for (auto a : said) text += " " + action_name(a);
      texts.add(qid, text_row(v.subject, said, {}, true, noise));
      negtexts.add(qid, text_row(v.subject, said, {neg_pick}, true, noise));

      query::Query q;
      q.qid = qid;
      q.kind = query::QueryKind::kOriginal;
      q.text = text;
      q.relevant_ids = {v.id};
      q.split = v.split;
      originals.push_back(q);

      if (v.split == "test") {
        std::vector<std::size_t> rest;
        for (auto a : said) {
          if (a != neg_pick) rest.push_back(a);
        }
        std::string neg_text = subject_name(v.subject);
        for (auto a : rest) neg_text += " " + action_name(a);
        neg_text += " not " + action_name(neg_pick);
        query::Query n;
        n.qid = qid + "#neg";
        n.kind = query::QueryKind::kNegated;
        n.text = neg_text;
        n.origin_qid = qid;
        n.known_negative_ids = {v.id};
        n.split = "test";
        texts.add(n.qid, text_row(v.subject, said, {neg_pick}, true, noise));
        // Scope split: the cue's verb is the negative part, the rest positive.
        subq.add(n.qid + "#pos", text_row(v.subject, rest, {}, true, noise));
        subq.add(n.qid + "#neg", text_row(v.subject, {neg_pick}, {}, false, noise));
        negated.push_back(std::move(n));
      }
    }
  }

  // Composed queries over the test split.
  std::vector<const Video*> test;
  for (const auto& v : videos) {
    if (v.split == "test") test.push_back(&v);
  }
  std::map<std::size_t, std::set<std::size_t>> actions_of_subject;
  for (const auto* v : test) {
    actions_of_subject[v->subject].insert(v->actions.begin(), v->actions.end());
  }
  Rng composed_rng(derive_seed(seed, "synth/composed"));
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  std::vector<query::Query> composed;
  const std::size_t max_attempts = 50 * std::max<std::size_t>(config.composed, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && composed.size() < config.composed;
       ++attempt) {
    const Video& v = *test[composed_rng.uniform_below(test.size())];
    const std::size_t pos = v.actions[composed_rng.uniform_below(v.actions.size())];
    std::vector<std::size_t> choices;
    for (auto a : actions_of_subject[v.subject]) {
      if (a != pos) choices.push_back(a);
    }
    if (choices.empty()) continue;
    const std::size_t neg = choices[composed_rng.uniform_below(choices.size())];
    if (!seen.insert({v.subject, pos, neg}).second) continue;
    auto relevant = composed_ground_truth(b, subject_name(v.subject), action_name(pos),
                                          action_name(neg));
    if (relevant.empty()) continue;
    const auto noise = noise_vec(composed_rng);
    query::Query q;
    q.qid = fmt::format("comp{:04d}", composed.size());
    q.kind = query::QueryKind::kComposed;
    const std::string s = subject_name(v.subject);
    q.text = s + " " + action_name(pos) + " and not " + action_name(neg);
    q.relevant_ids = std::move(relevant);
    for (const auto* t : test) {
      const auto& names = b.concepts.at(t->id);
      if (names.count(s) && names.count(action_name(pos)) && names.count(action_name(neg))) {
        q.known_negative_ids.insert(t->id);
      }
    }
    q.pos_subquery = s + " " + action_name(pos);
    q.neg_subquery = s + " " + action_name(neg);
    q.triplet = query::Triplet{s, action_name(pos), action_name(neg)};
    q.split = "test";
    texts.add(q.qid, text_row(v.subject, {pos, neg}, {neg}, true, noise));
    // The negative subquery names the subject too ("he is doing B").
    subq.add(q.qid + "#pos", text_row(v.subject, {pos}, {}, true, noise));
    subq.add(q.qid + "#neg", text_row(v.subject, {neg}, {}, true, noise));
    composed.push_back(std::move(q));
  }

  b.videos = video_store.build();
  b.texts = texts.build();
  b.negtexts = negtexts.build();
  b.subqueries = subq.build();
  b.queries = std::move(originals);
  b.queries.insert(b.queries.end(), negated.begin(), negated.end());
  b.queries.insert(b.queries.end(), composed.begin(), composed.end());
  return b;
}

std::set<std::string> composed_ground_truth(const SynthBenchmark& bench,
                                            const std::string& subject,
                                            const std::string& pos_action,
                                            const std::string& neg_action) {
  std::set<std::string> out;
  for (const auto& [vid, names] : bench.concepts) {
    if (bench.splits.at(vid) != "test") continue;
    if (names.count(subject) && names.count(pos_action) && !names.count(neg_action)) {
      out.insert(vid);
    }
  }
  return out;
}

std::vector<std::filesystem::path> write_synthetic_benchmark(const SynthBenchmark& bench,
                                                             const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto store = [&](const FeatureStore& s, const std::string& name) {
    retrieval::save_feature_store(s, dir / name);
    written.push_back(dir / name);
    written.push_back(retrieval::default_ids_path(dir / name));
  };
  store(bench.videos, "videos.nbf");
  store(bench.texts, "texts.nbf");
  store(bench.negtexts, "negtexts.nbf");
  store(bench.subqueries, "subqueries.nbf");
  write_file(dir / "queries.jsonl", query::queries_to_jsonl(bench.queries));
  written.push_back(dir / "queries.jsonl");
  std::string splits;
  for (const auto& [vid, split] : bench.splits) splits += vid + "\t" + split + "\n";
  write_file(dir / "splits.tsv", splits);
  written.push_back(dir / "splits.tsv");

  nlohmann::ordered_json meta;
  meta["seed"] = bench.seed;
  meta["config"] = bench.config.to_json();
  auto& concepts = meta["concepts"] = nlohmann::ordered_json::object();
  for (const auto& [vid, names] : bench.concepts) concepts[vid] = names;
  write_file(dir / "benchmark.json", meta.dump(1) + "\n");
  written.push_back(dir / "benchmark.json");
  return written;
}

SynthBenchmark load_benchmark_dir(const std::filesystem::path& dir) {
  SynthBenchmark b;
  b.videos = retrieval::load_feature_store(dir / "videos.nbf");
  b.texts = retrieval::load_feature_store(dir / "texts.nbf");
  b.negtexts = retrieval::load_feature_store(dir / "negtexts.nbf");
  b.subqueries = retrieval::load_feature_store(dir / "subqueries.nbf");
  b.queries = query::read_queries_file((dir / "queries.jsonl").string());
  b.splits = query::read_split_manifest_file((dir / "splits.tsv").string());
  if (std::filesystem::exists(dir / "benchmark.json")) {
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(read_file(dir / "benchmark.json"));
      b.seed = meta.value("seed", std::uint64_t{0});
      for (const auto& [vid, names] : meta.value("concepts", nlohmann::json::object()).items())
        b.concepts[vid] = names.get<std::set<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParse, (dir / "benchmark.json").string() + ": " + e.what());
    }
  }
  return b;
}

}  // namespace negbench::neglearn
