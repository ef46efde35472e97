#include "negbench/neglearn/trainer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "negbench/common/digest.hpp"
#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/retrieval/feature_store.hpp"

namespace negbench::neglearn {

void TrainConfig::validate() const {
  margins.validate();
  auto fail = [](const std::string& why) { throw Error(Errc::kInvalidArgument, why); };
  if (!(lr > 0)) fail("lr must be positive");
  if (!(lr_decay > 0 && lr_decay <= 1)) fail("lr_decay must lie in (0, 1]");
  if (!(rho > 0 && rho < 1)) fail("rho must lie in (0, 1)");
  if (!(eps > 0)) fail("eps must be positive");
  if (batch_size < 2) fail("batch_size must be at least 2");
  if (max_epochs == 0) fail("max_epochs must be positive");
  if (patience == 0) fail("patience must be positive");
  if (dim == 0) fail("dim must be positive");
  if (!(init_scale > 0)) fail("init_scale must be positive");
}

namespace {

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(Errc::kParse, "config '" + key + "': not a number: " + v);
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    auto n = std::stoull(v, &used);
    if (used == v.size() && !v.starts_with("-")) return n;
  } catch (const std::exception&) {
  }
  throw Error(Errc::kParse, "config '" + key + "': not a non-negative integer: " + v);
}

}  // namespace

void TrainConfig::set(const std::string& key, const std::string& value) {
  if (key == "aux") aux = parse_aux(value);
  else if (key == "m0") margins.m0 = to_real(key, value);
  else if (key == "m1") margins.m1 = to_real(key, value);
  else if (key == "m2") margins.m2 = to_real(key, value);
  else if (key == "m3") margins.m3 = to_real(key, value);
  else if (key == "m4") margins.m4 = to_real(key, value);
  else if (key == "lambda1") margins.lambda1 = to_real(key, value);
  else if (key == "lambda2") margins.lambda2 = to_real(key, value);
  else if (key == "lambda") margins.lambda1 = margins.lambda2 = to_real(key, value);
  else if (key == "lr") lr = to_real(key, value);
  else if (key == "lr_decay") lr_decay = to_real(key, value);
  else if (key == "rho") rho = to_real(key, value);
  else if (key == "eps") eps = to_real(key, value);
  else if (key == "batch_size") batch_size = to_count(key, value);
  else if (key == "max_epochs") max_epochs = to_count(key, value);
  else if (key == "patience") patience = to_count(key, value);
  else if (key == "dim") dim = to_count(key, value);
  else if (key == "init_scale") init_scale = to_real(key, value);
  else if (key == "seed") seed = to_count(key, value);
  else throw Error(Errc::kParse, "unknown config key '" + key + "'");
}

nlohmann::ordered_json TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["aux"] = aux_name(aux);
  j["m0"] = margins.m0;
  j["m1"] = margins.m1;
  j["m2"] = margins.m2;
  j["m3"] = margins.m3;
  j["m4"] = margins.m4;
  j["lambda1"] = margins.lambda1;
  j["lambda2"] = margins.lambda2;
  j["lr"] = lr;
  j["lr_decay"] = lr_decay;
  j["rho"] = rho;
  j["eps"] = eps;
  j["batch_size"] = batch_size;
  j["max_epochs"] = max_epochs;
  j["patience"] = patience;
  j["dim"] = dim;
  j["init_scale"] = init_scale;
  j["seed"] = seed;
  return j;
}

std::string TrainConfig::hash() const { return sha256_hex(to_json().dump()); }

TrainConfig parse_train_config(std::istream& in, TrainConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kParse, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    base.set(key, value);
  }
  return base;
}

TrainConfig read_train_config(const std::string& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  return parse_train_config(in, base);
}

double validation_mir(const DualEncoder& enc, const ValSet& val) {
  if (val.text.rows() == 0) return 0.0;
  const MatrixXd q = normalize_rows(enc.project_texts(val.text));
  const MatrixXd g = normalize_rows(enc.project_videos(val.gallery));
  const MatrixXd s = q * g.transpose();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    std::size_t best = static_cast<std::size_t>(s.cols()) + 1;
    for (int r : val.relevant[static_cast<std::size_t>(i)]) {
      const double target = s(i, r);
      std::size_t rank = 1;
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        if (s(i, j) > target || (s(i, j) == target && j < r)) ++rank;
      }
      best = std::min(best, rank);
    }
    if (best <= static_cast<std::size_t>(s.cols())) sum += 1.0 / static_cast<double>(best);
  }
  return sum / static_cast<double>(s.rows());
}

RmsProp::RmsProp(const DualEncoder& enc, double lr_, double rho_, double eps_)
    : lr(lr_),
      rho(rho_),
      eps(eps_),
      acc_t(MatrixXd::Zero(enc.wt.rows(), enc.wt.cols())),
      acc_v(MatrixXd::Zero(enc.wv.rows(), enc.wv.cols())) {}

void RmsProp::step(DualEncoder& enc, const MatrixXd& grad_t, const MatrixXd& grad_v) {
  acc_t = rho * acc_t + (1 - rho) * grad_t.cwiseProduct(grad_t);
  acc_v = rho * acc_v + (1 - rho) * grad_v.cwiseProduct(grad_v);
  enc.wt -= lr * grad_t.cwiseQuotient((acc_t.array().sqrt() + eps).matrix());
  enc.wv -= lr * grad_v.cwiseQuotient((acc_v.array().sqrt() + eps).matrix());
}

nlohmann::ordered_json TrainResult::history_json() const {
  auto out = nlohmann::ordered_json::array();
  for (const auto& h : history) {
    out.push_back({{"epoch", h.epoch},
                   {"loss", h.loss},
                   {"triplet", h.triplet},
                   {"aux", h.aux},
                   {"val_mir", h.val_mir},
                   {"lr", h.lr},
                   {"skipped_batches", h.skipped_batches}});
  }
  return out;
}

TrainResult train(const TrainData& data, const TrainConfig& config, const Validator& validate) {
  config.validate();
  if (data.size() < 2) throw Error(Errc::kInvalidArgument, "need at least two training pairs");
  const bool use_neg = needs_negatives(config.aux);
  Rng init_rng(derive_seed(config.seed, "init"));
  DualEncoder enc = DualEncoder::random(static_cast<std::size_t>(data.text.cols()),
                                        static_cast<std::size_t>(data.videos.cols()), config.dim,
                                        config.init_scale, init_rng);
  RmsProp opt(enc, config.lr, config.rho, config.eps);

  TrainResult result;
  result.encoder = enc;
  result.best_val_mir = -1.0;
  std::size_t stagnant = 0;
  std::vector<std::size_t> order(data.size());

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(derive_seed(config.seed, "epoch", std::to_string(epoch)));
    shuffle_rng.shuffle(order);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = opt.lr;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const auto b = static_cast<Eigen::Index>(end - start);
      if (b < 2) continue;
      Batch batch;
      batch.text.resize(b, data.text.cols());
      batch.video.resize(b, data.videos.cols());
      batch.negtext = MatrixXd::Zero(b, data.text.cols());
      batch.has_neg.assign(static_cast<std::size_t>(b), false);
      batch.group.resize(static_cast<std::size_t>(b));
      for (Eigen::Index k = 0; k < b; ++k) {
        const std::size_t i = order[start + static_cast<std::size_t>(k)];
        const int v = data.video_of[i];
        batch.text.row(k) = data.text.row(static_cast<Eigen::Index>(i));
        batch.video.row(k) = data.videos.row(v);
        batch.group[static_cast<std::size_t>(k)] = v;
        if (use_neg && data.has_neg[i]) {
          batch.negtext.row(k) = data.negtext.row(static_cast<Eigen::Index>(i));
          batch.has_neg[static_cast<std::size_t>(k)] = true;
        }
      }
      LossResult loss;
      try {
        loss = total_loss(enc, batch, config.margins, config.aux);
      } catch (const Error& e) {
        if (e.code() == Errc::kNoNegatives) {
          ++rec.skipped_batches;
          continue;
        }
        if (e.code() == Errc::kNonFiniteLoss) {
          throw Error(Errc::kNonFiniteLoss, "non-finite loss at epoch " + std::to_string(epoch) +
                                                ", batch " + std::to_string(batches + 1));
        }
        throw;
      }
      if (!loss.grad_wt.allFinite() || !loss.grad_wv.allFinite()) {
        throw Error(Errc::kNonFiniteLoss, "non-finite gradient at epoch " +
                                              std::to_string(epoch) + ", batch " +
                                              std::to_string(batches + 1));
      }
      opt.step(enc, loss.grad_wt, loss.grad_wv);
      rec.loss += loss.total;
      rec.triplet += loss.triplet;
      rec.aux += loss.aux;
      ++batches;
    }
    if (batches > 0) {
      rec.loss /= static_cast<double>(batches);
      rec.triplet /= static_cast<double>(batches);
      rec.aux /= static_cast<double>(batches);
    }
    rec.val_mir = validate(enc);
    result.history.push_back(rec);
    if (rec.val_mir > result.best_val_mir) {
      result.best_val_mir = rec.val_mir;
      result.best_epoch = epoch;
      result.encoder = enc;
      stagnant = 0;
    } else if (++stagnant >= config.patience) {
      result.stopped_early = true;
      break;
    }
    opt.lr *= config.lr_decay;
  }
  return result;
}

void save_checkpoint(const std::filesystem::path& dir, const TrainResult& result,
                     const TrainConfig& config) {
  retrieval::write_nbf1(dir / "W_t.nbf", result.encoder.wt.cast<float>());
  retrieval::write_nbf1(dir / "W_v.nbf", result.encoder.wv.cast<float>());
  nlohmann::ordered_json j;
  j["format"] = "negbench-model/1";
  j["d_text"] = result.encoder.text_dim();
  j["d_vid"] = result.encoder.video_dim();
  j["dim"] = result.encoder.dim();
  j["seed"] = config.seed;
  j["config_hash"] = config.hash();
  j["config"] = config.to_json();
  j["best_epoch"] = result.best_epoch;
  j["best_val_mir"] = result.best_val_mir;
  j["stopped_early"] = result.stopped_early;
  j["history"] = result.history_json();
  write_file(dir / "model.json", j.dump(2) + "\n");
}

DualEncoder load_checkpoint(const std::filesystem::path& dir) {
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(read_file(dir / "model.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParse, (dir / "model.json").string() + ": " + e.what());
  }
  DualEncoder enc;
  enc.wt = retrieval::read_nbf1(dir / "W_t.nbf").cast<double>();
  enc.wv = retrieval::read_nbf1(dir / "W_v.nbf").cast<double>();
  const auto dim = header.value("dim", std::size_t{0});
  if (enc.wt.cols() != enc.wv.cols() || enc.dim() != dim ||
      enc.text_dim() != header.value("d_text", std::size_t{0}) ||
      enc.video_dim() != header.value("d_vid", std::size_t{0})) {
    throw Error(Errc::kDimMismatch, "checkpoint matrices disagree with model.json");
  }
  return enc;
}

}  // namespace negbench::neglearn
