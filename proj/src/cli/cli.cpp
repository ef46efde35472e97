#include "negbench/cli/cli.hpp"

#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "negbench/common/error.hpp"
#include "negbench/common/parallel.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/metrics/metrics.hpp"
#include "negbench/neglearn/experiment.hpp"
#include "negbench/query/caption_index.hpp"
#include "negbench/query/repurpose.hpp"
#include "negbench/retrieval/scope.hpp"
#include "negbench/text/tagger.hpp"

namespace negbench::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Plain or one-JSON-object-per-line logging on stderr.
class Log {
 public:
  Log(bool quiet, bool json) : json_(json) {
    logger_ = std::make_shared<spdlog::logger>(
        "negbench", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    logger_->set_level(quiet ? spdlog::level::warn : spdlog::level::info);
    logger_->set_pattern(json ? R"({"time":"%Y-%m-%dT%H:%M:%S.%e","level":"%l","msg":%v})"
                              : "[%H:%M:%S] [%l] %v");
  }

  template <typename... Args>
  void info(fmt::format_string<Args...> f, Args&&... args) {
    emit(spdlog::level::info, fmt::format(f, std::forward<Args>(args)...));
  }
  template <typename... Args>
  void warn(fmt::format_string<Args...> f, Args&&... args) {
    emit(spdlog::level::warn, fmt::format(f, std::forward<Args>(args)...));
  }
  template <typename... Args>
  void error(fmt::format_string<Args...> f, Args&&... args) {
    emit(spdlog::level::err, fmt::format(f, std::forward<Args>(args)...));
  }

 private:
  void emit(spdlog::level::level_enum level, const std::string& msg) {
    logger_->log(level, json_ ? nlohmann::json(msg).dump() : msg);
  }

  bool json_;
  std::shared_ptr<spdlog::logger> logger_;
};

std::vector<query::Query> load_queries(const std::string& path,
                                       const std::optional<std::string>& split) {
  auto queries = query::read_queries_file(path);
  if (!split) return queries;
  return neglearn::queries_in_split(queries, *split);
}

// `key = value` lines with '#' comments.
std::vector<std::pair<std::string, std::string>> read_settings(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::kParse, fmt::format("{}:{}: expected key = value", path, n));
    out.emplace_back(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
  }
  return out;
}

std::vector<std::string> gallery_ids(const retrieval::FeatureStore& videos,
                                     const std::optional<std::string>& splits_path,
                                     const std::optional<std::string>& split) {
  if (!splits_path || !split) return videos.ids();
  auto ids = neglearn::videos_in_split(query::read_split_manifest_file(*splits_path), *split);
  if (ids.empty()) throw Error(Errc::kInvalidArgument, "no videos in split '" + *split + "'");
  return ids;
}

struct Context {
  Log& log;
  RunManifest manifest;
};

void finish(Context& ctx, const fs::path& manifest_file) {
  ctx.manifest.finished_at = utc_timestamp();
  write_manifest(ctx.manifest, manifest_file);
  ctx.log.info("manifest written to {}", manifest_file.string());
}

// --- repurpose -------------------------------------------------------------

struct RepurposeArgs {
  std::string captions, split, out;
  std::optional<std::string> pretagged;
  std::uint64_t seed = 0;
  std::string test_split = "test";
  std::string composed_source = "train";
  bool prose = false;
  bool no_composed = false;
};

void do_repurpose(const RepurposeArgs& a, Context& ctx) {
  const auto captions = query::read_captions_file(a.captions);
  const auto splits = query::read_split_manifest_file(a.split);
  ctx.manifest.add_input(a.captions);
  ctx.manifest.add_input(a.split);

  std::map<std::string, text::TaggedCaption> pretagged;
  if (a.pretagged) {
    std::ifstream in(*a.pretagged);
    if (!in) throw Error(Errc::kIo, "cannot open " + *a.pretagged);
    for (auto& tc : text::read_pretagged(in)) {
      const auto id = tc.caption_id;
      pretagged.emplace(id, std::move(tc));
    }
    ctx.manifest.add_input(*a.pretagged);
  }

  query::RepurposeConfig cfg;
  cfg.seed = a.seed;
  cfg.test_split = a.test_split;
  cfg.composed_source = a.composed_source;
  cfg.include_prose_template = a.prose;
  cfg.emit_composed = !a.no_composed;
  ctx.manifest.seed = a.seed;
  ctx.manifest.config = {{"test_split", cfg.test_split},
                         {"composed_source", cfg.composed_source},
                         {"include_prose_template", cfg.include_prose_template},
                         {"emit_composed", cfg.emit_composed}};

  ctx.log.info("repurposing {} captions (seed {})", captions.size(), a.seed);
  const auto result =
      query::repurpose_dataset(captions, splits, cfg, a.pretagged ? &pretagged : nullptr);

  fs::create_directories(a.out);
  auto written = query::write_bundle(result, cfg, a.out);

  std::map<std::string, retrieval::Subqueries> subqueries;
  std::size_t unsplit = 0;
  auto add_split = [&](const query::Query& q) {
    try {
      subqueries.emplace(q.qid, retrieval::split_negated_query(q));
    } catch (const Error&) {
      ++unsplit;
    }
  };
  for (const auto& q : result.negated) add_split(q);
  for (const auto& q : result.composed) add_split(q);
  const fs::path sub_path = fs::path(a.out) / "subqueries.tsv";
  write_file(sub_path, retrieval::subquery_splits_to_tsv(subqueries));
  written.push_back(sub_path);
  if (unsplit > 0) ctx.log.info("{} queries have no cue to split on and rank plainly", unsplit);

  const auto& s = result.stats;
  ctx.log.info("original {} negated {} composed {} (cue prevalence {:.3f})", s.original,
               s.negated, s.composed, s.cue_prevalence());
  for (const auto& p : written) ctx.manifest.add_output(p);
  finish(ctx, manifest_path(a.out, true));
}

// --- rank / boolean-rank ---------------------------------------------------

struct RankArgs {
  std::string queries, features_text, features_video, out;
  std::optional<std::string> subquery_features, model, splits, gallery_split, query_split;
  std::optional<std::size_t> k;
};

void do_rank(const RankArgs& a, bool boolean, Context& ctx) {
  const auto queries = load_queries(a.queries, a.query_split);
  const auto texts = retrieval::load_feature_store(a.features_text);
  const auto videos = retrieval::load_feature_store(a.features_video);
  for (const auto& p : {a.queries, a.features_text, a.features_video}) ctx.manifest.add_input(p);
  ctx.manifest.add_input(retrieval::default_ids_path(a.features_text));
  ctx.manifest.add_input(retrieval::default_ids_path(a.features_video));
  if (a.splits) ctx.manifest.add_input(*a.splits);

  std::optional<neglearn::DualEncoder> encoder;
  if (a.model) {
    encoder = neglearn::load_checkpoint(*a.model);
    for (const char* f : {"W_t.nbf", "W_v.nbf", "model.json"})
      ctx.manifest.add_input(fs::path(*a.model) / f);
  }
  const auto gallery =
      neglearn::subset(videos, gallery_ids(videos, a.splits, a.gallery_split));

  ctx.manifest.config = {{"boolean", boolean},
                         {"k", a.k ? ordered_json(*a.k) : ordered_json(nullptr)},
                         {"gallery_split", a.gallery_split.value_or("")},
                         {"query_split", a.query_split.value_or("")},
                         {"model", a.model.has_value()}};
  ctx.log.info("ranking {} queries against {} videos{}", queries.size(), gallery.size(),
               boolean ? " with boolean re-ranking" : "");

  std::vector<retrieval::Ranking> rankings;
  const neglearn::DualEncoder* enc = encoder ? &*encoder : nullptr;
  if (boolean) {
    const auto sub = retrieval::load_feature_store(*a.subquery_features);
    ctx.manifest.add_input(*a.subquery_features);
    rankings = neglearn::boolean_rank_queries(queries, texts, sub, gallery, enc, a.k);
  } else {
    rankings = neglearn::rank_queries(queries, texts, gallery, enc, a.k);
  }
  if (auto parent = fs::path(a.out).parent_path(); !parent.empty()) fs::create_directories(parent);
  write_file(a.out, retrieval::rankings_to_jsonl(rankings));
  ctx.manifest.add_output(a.out);
  finish(ctx, manifest_path(a.out, false));
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string queries, rankings, out;
  std::optional<std::string> query_split;
};

void do_eval(const EvalArgs& a, Context& ctx) {
  const auto queries = load_queries(a.queries, a.query_split);
  const auto rankings = retrieval::read_rankings_file(a.rankings);
  ctx.manifest.add_input(a.queries);
  ctx.manifest.add_input(a.rankings);
  auto report = metrics::evaluate(queries, rankings);
  report.config = {{"query_split", a.query_split.value_or("")},
                   {"queries_sha256", ctx.manifest.inputs.at(a.queries)},
                   {"rankings_sha256", ctx.manifest.inputs.at(a.rankings)}};
  ctx.manifest.config = report.config;
  const auto j = report.to_json();
  if (auto parent = fs::path(a.out).parent_path(); !parent.empty()) fs::create_directories(parent);
  write_file(a.out, j.dump(2) + "\n");
  if (report.original) ctx.log.info("original MIR {:.3f}", report.original->mir);
  if (report.negated) ctx.log.info("negated dMIR {:.3f}", report.negated->d_mir);
  if (report.composed) ctx.log.info("composed MIR {:.3f}", report.composed->mir);
  ctx.manifest.add_output(a.out);
  finish(ctx, manifest_path(a.out, false));
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::optional<std::string> config, features_negtext, splits;
  std::string features_video, features_text, queries, out;
  std::string train_split = "train", val_split = "val";
  std::optional<std::uint64_t> seed;
};

void do_train(const TrainArgs& a, Context& ctx) {
  neglearn::TrainConfig cfg;
  if (a.config) {
    cfg = neglearn::read_train_config(*a.config);
    ctx.manifest.add_input(*a.config);
  }
  if (a.seed) cfg.seed = *a.seed;
  cfg.validate();

  const auto queries = query::read_queries_file(a.queries);
  const auto texts = retrieval::load_feature_store(a.features_text);
  const auto videos = retrieval::load_feature_store(a.features_video);
  for (const auto& p : {a.queries, a.features_text, a.features_video}) ctx.manifest.add_input(p);
  std::optional<retrieval::FeatureStore> negtexts;
  if (a.features_negtext) {
    negtexts = retrieval::load_feature_store(*a.features_negtext);
    ctx.manifest.add_input(*a.features_negtext);
  } else if (neglearn::needs_negatives(cfg.aux)) {
    throw Error(Errc::kInvalidArgument, fmt::format("--features-negtext is required for aux '{}'",
                                                    neglearn::aux_name(cfg.aux)));
  }

  std::vector<std::string> gallery;
  if (a.splits) {
    ctx.manifest.add_input(*a.splits);
    gallery = neglearn::videos_in_split(query::read_split_manifest_file(*a.splits), a.val_split);
  } else {
    std::set<std::string> ids;
    for (const auto& q : queries) {
      if (q.kind == query::QueryKind::kOriginal && q.split == a.val_split)
        ids.insert(q.relevant_ids.begin(), q.relevant_ids.end());
    }
    gallery.assign(ids.begin(), ids.end());
  }

  const auto data = neglearn::make_train_data(
      queries, texts, neglearn::needs_negatives(cfg.aux) ? &*negtexts : nullptr, videos,
      a.train_split);
  const auto val = neglearn::make_val_set(queries, texts, videos, gallery, a.val_split);
  ctx.manifest.seed = cfg.seed;
  ctx.manifest.config = cfg.to_json();
  ctx.log.info("training on {} pairs, validating on {} queries ({} aux, hash {})", data.size(),
               val.text.rows(), neglearn::aux_name(cfg.aux), cfg.hash().substr(0, 12));

  const auto result = neglearn::train(data, cfg, [&](const neglearn::DualEncoder& e) {
    return neglearn::validation_mir(e, val);
  });
  for (const auto& r : result.history)
    ctx.log.info("epoch {} loss {:.5f} val MIR {:.4f}", r.epoch, r.loss, r.val_mir);
  ctx.log.info("best epoch {} (val MIR {:.4f}){}", result.best_epoch, result.best_val_mir,
               result.stopped_early ? ", stopped early" : "");

  fs::create_directories(a.out);
  neglearn::save_checkpoint(a.out, result, cfg);
  for (const char* f : {"W_t.nbf", "W_v.nbf", "model.json"})
    ctx.manifest.add_output(fs::path(a.out) / f);
  finish(ctx, manifest_path(a.out, true));
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::optional<std::string> grid, data, config;
  std::uint64_t seed = 0;
  std::string out;
};

ordered_json run_summary(const neglearn::BenchmarkRun& r) {
  ordered_json j;
  j["best_epoch"] = r.training.best_epoch;
  j["best_val_mir"] = r.training.best_val_mir;
  j["plain"] = r.plain.to_json();
  j["boolean"] = r.boolean.to_json();
  return j;
}

void do_sweep(const SweepArgs& a, Context& ctx) {
  neglearn::TrainConfig base;
  if (a.config) {
    base = neglearn::read_train_config(*a.config);
    ctx.manifest.add_input(*a.config);
  }
  base.seed = a.seed;
  std::string grid_text = neglearn::default_grid();
  if (a.grid) {
    grid_text = read_file(*a.grid);
    ctx.manifest.add_input(*a.grid);
  }
  std::istringstream grid(grid_text);
  const auto configs = neglearn::expand_grid(grid, base);

  neglearn::SynthBenchmark bench;
  if (a.data) {
    bench = neglearn::load_benchmark_dir(*a.data);
    for (const auto& e : fs::directory_iterator(*a.data)) {
      if (e.is_regular_file() && e.path().filename() != "manifest.json")
        ctx.manifest.add_input(e.path());
    }
  } else {
    bench = neglearn::generate_synthetic_benchmark(a.seed);
  }
  ctx.manifest.seed = a.seed;
  ctx.manifest.config = {{"data", a.data ? "provided" : "synthetic"},
                         {"base", base.to_json()},
                         {"grid", grid_text}};

  // The no-auxiliary baseline anchors the comparison.
  neglearn::TrainConfig none = base;
  none.aux = neglearn::AuxLoss::kNone;
  std::string lines;
  auto record = [&](const neglearn::TrainConfig& cfg) {
    const auto r = neglearn::run_on_benchmark(bench, cfg);
    ordered_json j;
    j["config_hash"] = cfg.hash();
    j["config"] = cfg.to_json();
    j["result"] = run_summary(r);
    lines += j.dump() + "\n";
    const double comp = r.plain.composed ? r.plain.composed->mir : 0.0;
    const double dmir = r.plain.negated ? r.plain.negated->d_mir : 0.0;
    ctx.log.info("{} -> dMIR {:.3f} composed MIR {:.3f}", cfg.hash().substr(0, 12), dmir, comp);
  };
  record(none);
  for (const auto& cfg : configs) record(cfg);

  fs::create_directories(a.out);
  const fs::path out = fs::path(a.out) / "sweep.jsonl";
  write_file(out, lines);
  ctx.manifest.add_output(out);
  finish(ctx, manifest_path(a.out, true));
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::string> config;
};

void do_synth(const SynthArgs& a, Context& ctx) {
  neglearn::SynthConfig cfg;
  if (a.config) {
    for (const auto& [k, v] : read_settings(*a.config)) cfg.set(k, v);
    ctx.manifest.add_input(*a.config);
  }
  cfg.validate();
  const auto bench = neglearn::generate_synthetic_benchmark(a.seed, cfg);
  fs::create_directories(a.out);
  for (const auto& p : neglearn::write_synthetic_benchmark(bench, a.out))
    ctx.manifest.add_output(p);
  ctx.manifest.seed = a.seed;
  ctx.manifest.config = cfg.to_json();
  ctx.log.info("{} videos, {} queries written to {}", bench.videos.size(), bench.queries.size(),
               a.out);
  finish(ctx, manifest_path(a.out, true));
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Negation-aware text-to-video retrieval benchmark toolkit", "negbench"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  bool quiet = false, json_logs = false;
  app.add_flag("--quiet", quiet, "Only log warnings and errors");
  app.add_flag("--json-logs", json_logs, "Log one JSON object per line");

  RepurposeArgs rp;
  auto* repurpose = app.add_subcommand("repurpose", "Build original, negated and composed queries");
  repurpose->add_option("--captions", rp.captions, "Caption TSV (video_id, caption_id, text)")
      ->required();
  repurpose->add_option("--split", rp.split, "Split manifest TSV (video_id, split)")->required();
  repurpose->add_option("--seed", rp.seed, "Root seed");
  repurpose->add_option("--out", rp.out, "Output directory")->required();
  repurpose->add_option("--pretagged", rp.pretagged, "Pre-tagged captions");
  repurpose->add_option("--test-split", rp.test_split, "Split evaluated with negated queries");
  repurpose->add_option("--composed-source", rp.composed_source,
                        "Split mined for composed queries");
  repurpose->add_flag("--prose", rp.prose, "Allow the prose composed template");
  repurpose->add_flag("--no-composed", rp.no_composed, "Skip composed queries");

  RankArgs rk;
  auto add_rank_options = [&](CLI::App* cmd) {
    cmd->add_option("--queries", rk.queries, "Query JSONL")->required();
    cmd->add_option("--features-text", rk.features_text, "Query features (NBF1), keyed by qid")
        ->required();
    cmd->add_option("--features-video", rk.features_video, "Video features (NBF1)")->required();
    cmd->add_option("--model", rk.model, "Checkpoint directory to project through");
    cmd->add_option("--splits", rk.splits, "Split manifest for the gallery");
    cmd->add_option("--gallery-split", rk.gallery_split, "Gallery split")->needs("--splits");
    cmd->add_option("--query-split", rk.query_split, "Only rank queries of this split");
    cmd->add_option("--k", rk.k, "Truncate rankings to k items");
    cmd->add_option("--out", rk.out, "Rankings JSONL")->required();
  };
  auto* rank = app.add_subcommand("rank", "Rank videos for every query by cosine similarity");
  add_rank_options(rank);
  auto* brank = app.add_subcommand("boolean-rank",
                                   "Rank by positive minus negative subquery similarity");
  add_rank_options(brank);
  brank->add_option("--subquery-features", rk.subquery_features,
                    "Subquery features keyed <qid>#pos / <qid>#neg")
      ->required();

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Compute R@N, MIR and delta metrics");
  eval->add_option("--queries", ev.queries, "Query JSONL")->required();
  eval->add_option("--rankings", ev.rankings, "Rankings JSONL")->required();
  eval->add_option("--query-split", ev.query_split, "Only evaluate queries of this split");
  eval->add_option("--out", ev.out, "Report JSON")->required();

  TrainArgs tr;
  auto* trainc = app.add_subcommand("train", "Train the dual encoder");
  trainc->add_option("--config", tr.config, "Training config (key = value)");
  trainc->add_option("--features-video", tr.features_video, "Video features")->required();
  trainc->add_option("--features-text", tr.features_text, "Caption features")->required();
  trainc->add_option("--features-negtext", tr.features_negtext, "Negated caption features");
  trainc->add_option("--queries", tr.queries, "Query JSONL with split tags")->required();
  trainc->add_option("--splits", tr.splits, "Split manifest (validation gallery)");
  trainc->add_option("--train-split", tr.train_split, "Training split");
  trainc->add_option("--val-split", tr.val_split, "Validation split");
  trainc->add_option("--seed", tr.seed, "Override the config seed");
  trainc->add_option("--out", tr.out, "Checkpoint directory")->required();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Train and evaluate over a hyperparameter grid");
  sweep->add_option("--grid", sw.grid, "Grid file (key = v1, v2; '---' separates blocks)");
  sweep->add_option("--data", sw.data, "Benchmark directory (default: generate synthetic)");
  sweep->add_option("--config", sw.config, "Base training config");
  sweep->add_option("--seed", sw.seed, "Seed for data generation and training");
  sweep->add_option("--out", sw.out, "Output directory")->required();

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate the synthetic benchmark");
  synth->add_option("--seed", sy.seed, "Root seed");
  synth->add_option("--config", sy.config, "Generator settings (key = value)");
  synth->add_option("--out", sy.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  Log log(quiet, json_logs);
  Context ctx{log, {}};
  ctx.manifest.argv.assign(argv, argv + argc);
  ctx.manifest.started_at = utc_timestamp();
  try {
    const auto* cmd = app.get_subcommands().front();
    ctx.manifest.command = cmd->get_name();
    log.info("negbench {} {} ({} workers)", kVersion, cmd->get_name(), worker_count());
    if (cmd == repurpose) do_repurpose(rp, ctx);
    else if (cmd == rank) do_rank(rk, false, ctx);
    else if (cmd == brank) do_rank(rk, true, ctx);
    else if (cmd == eval) do_eval(ev, ctx);
    else if (cmd == trainc) do_train(tr, ctx);
    else if (cmd == sweep) do_sweep(sw, ctx);
    else if (cmd == synth) do_synth(sy, ctx);
    return 0;
  } catch (const Error& e) {
    log.error("{}", e.what());
    return e.is_input_error() ? 1 : 2;
  } catch (const nlohmann::json::exception& e) {
    log.error("malformed JSON: {}", e.what());
    return 1;
  } catch (const fs::filesystem_error& e) {
    log.error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    log.error("internal error: {}", e.what());
    return 2;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace negbench::cli
