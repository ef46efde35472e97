#include <filesystem>
#include <iostream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "negbench/cli/cli.hpp"
#include "negbench/common/text_io.hpp"
#include "test_helpers.hpp"

using namespace negbench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

// Runs the CLI quietly, capturing stderr.
int run_cli(std::vector<std::string> args, std::string* err = nullptr) {
  args.insert(args.begin(), "negbench");
  args.push_back("--quiet");
  std::ostringstream capture;
  auto* old = std::cerr.rdbuf(capture.rdbuf());
  const int rc = cli::run(args);
  std::cerr.rdbuf(old);
  if (err) *err = capture.str();
  return rc;
}

nlohmann::json read_json(const std::string& path) { return nlohmann::json::parse(read_file(path)); }

}  // namespace

TEST_CASE("usage errors exit 1") {
  std::string err;
  CHECK(run_cli({"rank", "--queries", "q.jsonl"}, &err) == 1);
  CHECK(err.find("--features-text") != std::string::npos);
  CHECK(run_cli({"eval", "--bogus"}, &err) == 1);
  CHECK(run_cli({"frobnicate"}, &err) == 1);
  CHECK(run_cli({}, &err) == 1);
}

TEST_CASE("input errors exit 1") {
  TempDir dir("negbench_cli_input");
  write_file(dir / "q.jsonl", "{not json\n");
  write_file(dir / "r.jsonl", "");
  CHECK(run_cli({"eval", "--queries", dir / "q.jsonl", "--rankings", dir / "r.jsonl", "--out",
                 dir / "rep.json"}) == 1);
  CHECK(run_cli({"eval", "--queries", dir / "missing.jsonl", "--rankings", dir / "r.jsonl",
                 "--out", dir / "rep.json"}) == 1);
  CHECK_FALSE(fs::exists(dir / "rep.json"));
}

TEST_CASE("manifest paths") {
  CHECK(cli::manifest_path("out", true) == fs::path("out/manifest.json"));
  CHECK(cli::manifest_path("r.jsonl", false) == fs::path("r.jsonl.manifest.json"));
}

TEST_CASE("synth, train, rank and eval end to end") {
  TempDir dir("negbench_cli_e2e");
  const auto d = dir / "d";
  write_file(dir / "train.cfg", "aux = bnl\nmax_epochs = 3\n");
  REQUIRE(run_cli({"synth", "--seed", "7", "--out", d}) == 0);
  REQUIRE(run_cli({"train", "--config", dir / "train.cfg", "--features-video", d + "/videos.nbf",
                   "--features-text", d + "/texts.nbf", "--features-negtext",
                   d + "/negtexts.nbf", "--queries", d + "/queries.jsonl", "--splits",
                   d + "/splits.tsv", "--seed", "7", "--out", dir / "model"}) == 0);
  const std::vector<std::string> common = {
      "--queries", d + "/queries.jsonl", "--query-split", "test", "--features-text",
      d + "/texts.nbf", "--features-video", d + "/videos.nbf", "--model", dir / "model",
      "--splits", d + "/splits.tsv", "--gallery-split", "test"};
  auto with = [&](std::vector<std::string> head, std::vector<std::string> tail) {
    head.insert(head.end(), common.begin(), common.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  REQUIRE(run_cli(with({"rank"}, {"--out", dir / "r.jsonl"})) == 0);
  REQUIRE(run_cli(with({"boolean-rank"}, {"--subquery-features", d + "/subqueries.nbf", "--out",
                                          dir / "b.jsonl"})) == 0);
  for (const auto* name : {"r", "b"}) {
    const auto report = dir / (std::string(name) + ".json");
    REQUIRE(run_cli({"eval", "--queries", d + "/queries.jsonl", "--query-split", "test",
                     "--rankings", dir / (std::string(name) + ".jsonl"), "--out", report}) == 0);
    const auto j = read_json(report);
    CHECK(j["schema"] == "negbench-report/1");
    CHECK(j["sets"].contains("composed"));
    CHECK(j["sets"].contains("negated"));
  }

  const auto m = read_json(dir / "model/manifest.json");
  CHECK(m["command"] == "train");
  CHECK(m["seed"] == 7);
  CHECK(m["inputs"].size() == 6);
  CHECK(m["outputs"].size() == 3);
  CHECK(m["inputs"][d + "/queries.jsonl"].get<std::string>().size() == 64);
  CHECK(fs::exists(dir / "r.jsonl.manifest.json"));
  CHECK(fs::exists(d + "/manifest.json"));

  // Without negated features an auxiliary loss cannot train.
  CHECK(run_cli({"train", "--config", dir / "train.cfg", "--features-video", d + "/videos.nbf",
                 "--features-text", d + "/texts.nbf", "--queries", d + "/queries.jsonl",
                 "--out", dir / "model2"}) == 1);
}

TEST_CASE("same seed gives identical output digests") {
  TempDir dir("negbench_cli_det");
  auto outputs = [&](const std::string& sub) {
    const auto out = dir / sub;
    REQUIRE(run_cli({"repurpose", "--captions", testing::fixture("captions.tsv"), "--split",
                     testing::fixture("splits.tsv"), "--seed", "11", "--out", out}) == 0);
    const auto manifest = read_json(out + "/manifest.json");
    std::map<std::string, std::string> digests;
    for (const auto& [path, digest] : manifest["outputs"].items())
      digests[fs::path(path).filename().string()] = digest.get<std::string>();
    return digests;
  };
  const auto a = outputs("a");
  const auto b = outputs("b");
  CHECK(a.size() == 5);
  CHECK(a == b);
  CHECK(fs::exists(dir / "a/subqueries.tsv"));
}

TEST_CASE("sweep over a small grid") {
  TempDir dir("negbench_cli_sweep");
  write_file(dir / "grid", "aux = bcl_query\nm4 = 0.3, 0.6\nmax_epochs = 2\n");
  write_file(dir / "base.cfg", "max_epochs = 2\n");
  REQUIRE(run_cli({"sweep", "--grid", dir / "grid", "--config", dir / "base.cfg", "--seed", "2",
                   "--out", dir / "s"}) == 0);
  std::istringstream lines(read_file(dir / "s/sweep.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["result"]["plain"]["schema"] == "negbench-report/1");
    ++n;
  }
  CHECK(n == 3);  // baseline plus two grid points
}
