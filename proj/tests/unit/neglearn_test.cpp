#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "negbench/common/error.hpp"
#include "negbench/common/rng.hpp"
#include "negbench/neglearn/experiment.hpp"

using namespace negbench;
using namespace negbench::neglearn;

namespace {

MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

Batch random_batch(std::size_t n, std::size_t dt, std::size_t dv, Rng& rng) {
  Batch b;
  const auto rows = static_cast<Eigen::Index>(n);
  b.text = random_matrix(rows, static_cast<Eigen::Index>(dt), rng);
  b.video = random_matrix(rows, static_cast<Eigen::Index>(dv), rng);
  b.negtext = random_matrix(rows, static_cast<Eigen::Index>(dt), rng);
  for (std::size_t i = 0; i < n; ++i) {
    b.has_neg.push_back(i % 4 != 3);
    b.group.push_back(static_cast<int>(i));
  }
  return b;
}

double cos_of(const VectorXd& a, const VectorXd& b) { return a.dot(b) / (a.norm() * b.norm()); }

// Every hinge argument and hard-negative choice is at least `gap` from a
// kink, so finite differences stay on one linear piece.
bool away_from_kinks(const DualEncoder& enc, const Batch& b, const MarginConfig& m,
                     double gap) {
  const auto sims = forward_similarities(enc, b);
  auto clear = [&](double x) { return std::abs(x) > gap; };
  for (Eigen::Index i = 0; i < sims.s.rows(); ++i) {
    std::vector<double> negs;
    for (Eigen::Index j = 0; j < sims.s.cols(); ++j) {
      if (b.group[static_cast<std::size_t>(j)] != b.group[static_cast<std::size_t>(i)])
        negs.push_back(sims.s(i, j));
    }
    std::sort(negs.rbegin(), negs.rend());
    if (negs.size() > 1 && negs[0] - negs[1] < gap) return false;
    if (!clear(m.m0 + negs[0] - sims.s(i, i))) return false;
    if (!b.has_neg[static_cast<std::size_t>(i)]) continue;
    const double gv = sims.s(i, i) - sims.s_xqn(i);
    const double gq = sims.s(i, i) - sims.s_qqn(i);
    if (!clear(gv - m.m1) || !clear(gv - m.m2) || !clear(gq - m.m1) || !clear(gq - m.m3) ||
        !clear(gq - m.m4))
      return false;
  }
  return true;
}

double relative_error(const MatrixXd& a, const MatrixXd& b) {
  const double scale = std::max(a.norm() + b.norm(), 1e-12);
  return (a - b).norm() / scale;
}

MatrixXd numeric_grad(DualEncoder enc, MatrixXd DualEncoder::*field, const Batch& b,
                      const MarginConfig& m, AuxLoss aux) {
  const double h = 1e-5;
  MatrixXd& w = enc.*field;
  MatrixXd g(w.rows(), w.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const double orig = w(i, j);
      w(i, j) = orig + h;
      const double up = total_loss(enc, b, m, aux, false).total;
      w(i, j) = orig - h;
      const double down = total_loss(enc, b, m, aux, false).total;
      w(i, j) = orig;
      g(i, j) = (up - down) / (2 * h);
    }
  }
  return g;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::kInvalidArgument;
}

}  // namespace

TEST_CASE("scalar loss examples") {
  CHECK(std::abs(triplet_term(0.5, 0.6, 0.2) - 0.1) < 1e-12);
  CHECK(triplet_term(0.3, 0.6, 0.2) == 0.0);
  CHECK(snl_video_term(0.8, 0.5, 0.1) == 0.0);
  CHECK(std::abs(snl_video_term(0.8, 0.75, 0.1) - 0.05) < 1e-12);
  CHECK(bcl_video_term(0.8, 0.5, 0.1, 0.6) == 0.0);
  CHECK(std::abs(bcl_video_term(0.8, 0.75, 0.1, 0.6) - 0.05) < 1e-12);
  CHECK(std::abs(bcl_video_term(0.8, 0.1, 0.1, 0.6) - 0.1) < 1e-12);
  CHECK(bcl_query_term(0.9, 0.7, 0.1, 0.3) == 0.0);
  CHECK(std::abs(bcl_query_term(0.9, 0.85, 0.1, 0.3) - 0.05) < 1e-12);
  CHECK(std::abs(bcl_query_term(0.9, 0.4, 0.1, 0.3) - 0.2) < 1e-12);
  CHECK(hinge(0.0) == 0.0);
  CHECK(hinge(-1.0) == 0.0);
}

TEST_CASE("zero band and non-negativity") {
  Rng rng(11);
  const MarginConfig m;
  for (int i = 0; i < 1000; ++i) {
    const double sxq = 2 * rng.uniform01() - 1, sxqn = 2 * rng.uniform01() - 1;
    const double gap = sxq - sxqn;
    const double v = bcl_video_term(sxq, sxqn, m.m1, m.m2);
    const double q = bcl_query_term(sxq, sxqn, m.m3, m.m4);
    CHECK(v >= 0.0);
    CHECK(q >= 0.0);
    CHECK(snl_video_term(sxq, sxqn, m.m1) >= 0.0);
    if (gap >= m.m1 && gap <= m.m2) CHECK(v == 0.0);
    if (gap >= m.m3 && gap <= m.m4) CHECK(q == 0.0);
    if (gap < m.m1 || gap > m.m2) CHECK(v > 0.0);
  }
}

TEST_CASE("margin validation") {
  MarginConfig m;
  m.m2 = 0.05;
  CHECK(code_of([&] { m.validate(); }) == Errc::kInvalidMargins);
  m = {};
  m.m4 = 2.0;
  CHECK(code_of([&] { m.validate(); }) == Errc::kInvalidMargins);
  m = {};
  m.lambda2 = -1;
  CHECK(code_of([&] { m.validate(); }) == Errc::kInvalidMargins);
  m = {};
  m.m0 = 0;
  CHECK(code_of([&] { m.validate(); }) == Errc::kInvalidMargins);
  CHECK_NOTHROW(MarginConfig{}.validate());
  CHECK(parse_aux("bcl_query") == AuxLoss::kBclQuery);
  CHECK(aux_name(AuxLoss::kSnlVideo) == "snl_video");
  CHECK_THROWS_AS(parse_aux("bogus"), Error);
}

TEST_CASE("forward similarities") {
  SUBCASE("identity projections") {
    const auto enc = DualEncoder::identity(3);
    Batch b;
    b.text = MatrixXd{{1, 0, 0}, {0, 1, 0}};
    b.video = MatrixXd{{2, 0, 0}, {0, 0, 1}};
    b.negtext = b.text;
    b.has_neg = {true, false};
    b.group = {0, 1};
    const auto sims = forward_similarities(enc, b);
    CHECK(sims.s(0, 0) == doctest::Approx(1.0));
    CHECK(sims.s(1, 1) == doctest::Approx(0.0));
    CHECK(sims.s_qqn(0) == doctest::Approx(1.0));
    CHECK(sims.s_qqn(1) == 0.0);
  }
  SUBCASE("naive oracle") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng rng(seed);
      const auto enc = DualEncoder::random(5, 6, 4, 1.0, rng);
      const auto b = random_batch(4, 5, 6, rng);
      const auto sims = forward_similarities(enc, b);
      for (Eigen::Index i = 0; i < 4; ++i) {
        const VectorXd q = enc.wt.transpose() * b.text.row(i).transpose();
        const VectorXd n = enc.wt.transpose() * b.negtext.row(i).transpose();
        for (Eigen::Index j = 0; j < 4; ++j) {
          const VectorXd x = enc.wv.transpose() * b.video.row(j).transpose();
          CHECK(std::abs(sims.s(i, j) - cos_of(x, q)) < 1e-10);
        }
        if (!b.has_neg[static_cast<std::size_t>(i)]) continue;
        const VectorXd x = enc.wv.transpose() * b.video.row(i).transpose();
        CHECK(std::abs(sims.s_xqn(i) - cos_of(x, n)) < 1e-10);
        CHECK(std::abs(sims.s_qqn(i) - cos_of(q, n)) < 1e-10);
      }
    }
  }
  SUBCASE("zero norm") {
    auto enc = DualEncoder::identity(2);
    Batch b;
    b.text = MatrixXd{{0, 0}, {1, 0}};
    b.video = MatrixXd{{1, 0}, {0, 1}};
    b.negtext = b.text;
    b.has_neg = {false, false};
    b.group = {0, 1};
    CHECK(code_of([&] { forward_similarities(enc, b); }) == Errc::kZeroNorm);
  }
}

TEST_CASE("hardest negative matches exhaustive scan") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto enc = DualEncoder::random(6, 6, 5, 1.0, rng);
    auto b = random_batch(8, 6, 6, rng);
    b.group = {0, 1, 2, 2, 3, 4, 5, 5};
    const auto sims = forward_similarities(enc, b);
    const auto res = triplet_loss(sims, b.group, 0.2);
    double mean = 0.0;
    for (Eigen::Index i = 0; i < 8; ++i) {
      int best = -1;
      for (Eigen::Index j = 0; j < 8; ++j) {
        if (b.group[static_cast<std::size_t>(j)] == b.group[static_cast<std::size_t>(i)]) continue;
        if (best < 0 || sims.s(i, j) > sims.s(i, best)) best = static_cast<int>(j);
      }
      CHECK(res.hardest[static_cast<std::size_t>(i)] == best);
      mean += hinge(0.2 + sims.s(i, best) - sims.s(i, i));
    }
    CHECK(std::abs(res.loss - mean / 8) < 1e-12);
  }
}

TEST_CASE("no negatives") {
  Rng rng(3);
  const auto enc = DualEncoder::random(3, 3, 2, 1.0, rng);
  auto b = random_batch(1, 3, 3, rng);
  CHECK(code_of([&] { total_loss(enc, b, {}, AuxLoss::kNone); }) == Errc::kNoNegatives);
  b = random_batch(3, 3, 3, rng);
  b.group = {7, 7, 7};
  CHECK(code_of([&] { total_loss(enc, b, {}, AuxLoss::kNone); }) == Errc::kNoNegatives);
}

TEST_CASE("loss reductions") {
  Rng rng(5);
  const auto enc = DualEncoder::random(4, 4, 3, 1.0, rng);
  const auto b = random_batch(6, 4, 4, rng);
  MarginConfig m;
  m.lambda2 = 0.0;
  const auto tri = total_loss(enc, b, m, AuxLoss::kNone);
  const auto bnl = total_loss(enc, b, m, AuxLoss::kBnl);
  CHECK(bnl.total == tri.total);
  CHECK(bnl.total == bnl.triplet);
  CHECK((bnl.grad_wt - tri.grad_wt).norm() == 0.0);

  // The auxiliary term is averaged over samples with a negative.
  MarginConfig one;
  one.lambda1 = 1.0;
  const auto snl = total_loss(enc, b, one, AuxLoss::kSnlVideo, false);
  const auto s2 = forward_similarities(enc, b);
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < 6; ++i) {
    if (!b.has_neg[static_cast<std::size_t>(i)]) continue;
    sum += snl_video_term(s2.s(i, i), s2.s_xqn(i), one.m1);
    ++count;
  }
  CHECK(std::abs(snl.aux - sum / count) < 1e-12);
  CHECK(std::abs(snl.total - (snl.triplet + snl.aux)) < 1e-12);
}

TEST_CASE("gradients match central differences") {
  MarginConfig m;
  m.lambda1 = m.lambda2 = 0.7;
  for (auto aux : {AuxLoss::kNone, AuxLoss::kSnlVideo, AuxLoss::kSnlQuery, AuxLoss::kBclVideo,
                   AuxLoss::kBclQuery, AuxLoss::kBnl}) {
    CAPTURE(aux_name(aux));
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 10; ++seed) {
      REQUIRE(seed < 1000);
      Rng rng(derive_seed(seed, "gradcheck", aux_name(aux)));
      const auto enc = DualEncoder::random(3, 5, 4, 1.0, rng);
      const auto b = random_batch(6, 3, 5, rng);
      if (!away_from_kinks(enc, b, m, 1e-3)) continue;
      ++checked;
      const auto analytic = total_loss(enc, b, m, aux);
      const auto gt = numeric_grad(enc, &DualEncoder::wt, b, m, aux);
      const auto gv = numeric_grad(enc, &DualEncoder::wv, b, m, aux);
      CHECK(relative_error(analytic.grad_wt, gt) < 1e-4);
      CHECK(relative_error(analytic.grad_wv, gv) < 1e-4);
    }
  }
}

TEST_CASE("early stop on worsening validation") {
  Rng rng(1);
  TrainData data;
  data.text = random_matrix(8, 3, rng);
  data.negtext = data.text;
  data.has_neg.assign(8, false);
  data.videos = random_matrix(8, 3, rng);
  for (int i = 0; i < 8; ++i) data.video_of.push_back(i);
  TrainConfig cfg;
  cfg.aux = AuxLoss::kNone;
  cfg.batch_size = 4;
  cfg.dim = 3;
  double next = 1.0;
  const auto result = train(data, cfg, [&](const DualEncoder&) { return next -= 0.1; });
  CHECK(result.history.size() == 3);
  CHECK(result.stopped_early);
  CHECK(result.best_epoch == 1);
  CHECK(result.best_val_mir == doctest::Approx(0.9));
}

TEST_CASE("two separable clusters reach validation MIR 1") {
  Rng rng(4);
  TrainData data;
  const std::size_t n = 40;
  data.text.resize(n, 2);
  data.negtext.resize(n, 2);
  data.videos.resize(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double c = i % 2 == 0 ? 1.0 : -1.0;
    data.text.row(r) << c + 0.1 * rng.normal(), 0.2 + 0.1 * rng.normal();
    data.videos.row(r) << 0.3 + 0.1 * rng.normal(), c + 0.1 * rng.normal();
    data.video_of.push_back(static_cast<int>(i));
    data.has_neg.push_back(false);
  }
  data.negtext = data.text;
  ValSet val;
  val.text = MatrixXd{{1.0, 0.2}, {-1.0, 0.2}};
  val.gallery = MatrixXd{{0.3, 1.0}, {0.3, -1.0}};
  val.relevant = {{0}, {1}};
  TrainConfig cfg;
  cfg.aux = AuxLoss::kNone;
  cfg.lr = 1e-2;
  cfg.dim = 2;
  cfg.batch_size = 8;
  cfg.max_epochs = 200;
  cfg.patience = 200;
  cfg.seed = 9;
  const auto result = train(data, cfg, [&](const DualEncoder& e) { return validation_mir(e, val); });
  CHECK(result.best_val_mir == 1.0);
  CHECK(validation_mir(result.encoder, val) == 1.0);
}

TEST_CASE("training determinism") {
  const auto bench = generate_synthetic_benchmark(3);
  TrainConfig cfg;
  cfg.seed = 3;
  cfg.max_epochs = 3;
  const auto a = run_on_benchmark(bench, cfg);
  const auto b = run_on_benchmark(bench, cfg);
  CHECK(a.training.history_json().dump() == b.training.history_json().dump());
  CHECK(a.training.encoder.wt == b.training.encoder.wt);
  CHECK(a.plain.to_json().dump() == b.plain.to_json().dump());
}

TEST_CASE("synthetic benchmark ground truth") {
  const auto bench = generate_synthetic_benchmark(5);
  std::size_t composed = 0, negated = 0;
  for (const auto& q : bench.queries) {
    if (q.kind == query::QueryKind::kComposed) {
      ++composed;
      REQUIRE(q.triplet.has_value());
      const auto& t = *q.triplet;
      // Exhaustive enumeration over the test videos.
      std::set<std::string> expected, known;
      for (const auto& [vid, names] : bench.concepts) {
        if (bench.splits.at(vid) != "test") continue;
        const bool s = names.count(t.subject), a = names.count(t.pos_vp),
                   n = names.count(t.neg_vp);
        if (s && a && !n) expected.insert(vid);
        if (s && a && n) known.insert(vid);
      }
      CHECK(q.relevant_ids == expected);
      CHECK(q.known_negative_ids == known);
      CHECK(composed_ground_truth(bench, t.subject, t.pos_vp, t.neg_vp) == expected);
      CHECK(bench.subqueries.contains(q.qid + "#pos"));
      CHECK(bench.subqueries.contains(q.qid + "#neg"));
    } else if (q.kind == query::QueryKind::kNegated) {
      ++negated;
      CHECK(q.known_negative_ids.size() == 1);
      REQUIRE(q.origin_qid.has_value());
      CHECK(bench.texts.contains(*q.origin_qid));
    }
  }
  CHECK(composed > 0);
  CHECK(negated > 0);
  CHECK(bench.videos.size() == 1050);

  const auto again = generate_synthetic_benchmark(5);
  CHECK(again.texts.matrix() == bench.texts.matrix());
  CHECK(generate_synthetic_benchmark(6).videos.matrix() != bench.videos.matrix());
}

TEST_CASE("negation-blind encoder has near-zero delta") {
  const auto bench = generate_synthetic_benchmark(2);
  Rng rng(2);
  auto enc = DualEncoder::random(bench.texts.dim(), bench.videos.dim(), 32, 1.0, rng);
  enc.wt.bottomRows(static_cast<Eigen::Index>(bench.config.word_dim)).setZero();
  const auto test = queries_in_split(bench.queries, "test");
  const auto gallery = subset(bench.videos, videos_in_split(bench.splits, "test"));
  const auto report = metrics::evaluate(test, rank_queries(test, bench.texts, gallery, &enc));
  REQUIRE(report.negated.has_value());
  CHECK(std::abs(report.negated->d_mir) < 0.02);
}

TEST_CASE("negation learning raises delta over a zero weight") {
  const auto bench = generate_synthetic_benchmark(1);
  TrainConfig cfg;
  cfg.seed = 1;
  cfg.aux = AuxLoss::kBnl;
  const auto bnl = run_on_benchmark(bench, cfg);
  cfg.margins.lambda2 = 0.0;
  const auto off = run_on_benchmark(bench, cfg);
  CHECK(bnl.plain.negated->d_mir > off.plain.negated->d_mir);
}

TEST_CASE("checkpoint round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "negbench_ckpt_test";
  std::filesystem::create_directories(dir);
  Rng rng(8);
  TrainResult result;
  result.encoder = DualEncoder::random(4, 5, 3, 1.0, rng);
  TrainConfig cfg;
  cfg.seed = 8;
  save_checkpoint(dir, result, cfg);
  const auto loaded = load_checkpoint(dir);
  CHECK(loaded.wt == result.encoder.wt.cast<float>().cast<double>());
  CHECK(loaded.wv == result.encoder.wv.cast<float>().cast<double>());
  std::filesystem::remove_all(dir);
}

TEST_CASE("config parsing and grid") {
  std::istringstream in("# comment\nlr = 0.05\naux = snl_query\nm2 = 0.9\nlambda = 0.01\n");
  const auto cfg = parse_train_config(in);
  CHECK(cfg.lr == 0.05);
  CHECK(cfg.aux == AuxLoss::kSnlQuery);
  CHECK(cfg.margins.m2 == 0.9);
  CHECK(cfg.margins.lambda1 == 0.01);
  CHECK(cfg.margins.lambda2 == 0.01);
  CHECK(cfg.hash() != TrainConfig{}.hash());
  std::istringstream same("lr=0.05\naux=snl_query\nm2=0.9\nlambda=0.01");
  CHECK(cfg.hash() == parse_train_config(same).hash());

  std::istringstream bad("nonsense = 1\n");
  CHECK_THROWS_AS(parse_train_config(bad), Error);

  std::istringstream grid("aux = bcl_video\nlambda2 = 0.001, 0.01\nm2 = 0.2, 0.3, 0.6, 0.9\n---\n"
                          "aux = snl_video\nlambda1 = 0.001, 0.01\n");
  const auto configs = expand_grid(grid, TrainConfig{});
  REQUIRE(configs.size() == 10);
  CHECK(configs[0].margins.m2 == 0.2);
  CHECK(configs[7].margins.lambda2 == 0.01);
  CHECK(configs[9].aux == AuxLoss::kSnlVideo);
  std::istringstream def(default_grid());
  CHECK(expand_grid(def, TrainConfig{}).size() == 18);
}
