#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "negbench/neglearn/losses.hpp"

namespace negbench::neglearn {

struct TrainConfig {
  MarginConfig margins;
  AuxLoss aux = AuxLoss::kBnl;
  double lr = 1e-2;
  double lr_decay = 0.99;  // per epoch
  double rho = 0.9;        // RMSProp accumulator decay
  double eps = 1e-8;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 50;
  std::size_t patience = 2;  // stagnant validation epochs before stopping
  std::size_t dim = 32;
  double init_scale = 0.01;
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) / Error(kInvalidMargins).
  void validate() const;
  // Applies one `key = value` setting; unknown keys throw.
  void set(const std::string& key, const std::string& value);
  nlohmann::ordered_json to_json() const;
  std::string hash() const;  // sha256 of the canonical JSON
};

// key = value lines, '#' comments.
TrainConfig parse_train_config(std::istream& in, TrainConfig base = {});
TrainConfig read_train_config(const std::string& path, TrainConfig base = {});

// Caption-video pairs for training. video_of[i] indexes rows of `videos`.
struct TrainData {
  MatrixXd text;
  MatrixXd negtext;            // same rows as text; unused where !has_neg
  std::vector<bool> has_neg;
  std::vector<int> video_of;
  MatrixXd videos;

  std::size_t size() const { return static_cast<std::size_t>(text.rows()); }
};

// Text queries against a video gallery; relevant rows per query.
struct ValSet {
  MatrixXd text;
  std::vector<std::vector<int>> relevant;
  MatrixXd gallery;
};

// MIR of the encoder on the set, ties broken by gallery row.
double validation_mir(const DualEncoder& enc, const ValSet& val);

struct RmsProp {
  double lr;
  double rho;
  double eps;
  MatrixXd acc_t;
  MatrixXd acc_v;

  RmsProp(const DualEncoder& enc, double lr, double rho, double eps);
  void step(DualEncoder& enc, const MatrixXd& grad_t, const MatrixXd& grad_v);
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;      // mean batch loss
  double triplet = 0.0;
  double aux = 0.0;
  double val_mir = 0.0;
  double lr = 0.0;
  std::size_t skipped_batches = 0;
};

struct TrainResult {
  DualEncoder encoder;  // best validation snapshot
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_mir = 0.0;
  bool stopped_early = false;

  nlohmann::ordered_json history_json() const;
};

using Validator = std::function<double(const DualEncoder&)>;

// RMSProp over seeded per-epoch shuffles; the learning rate decays after
// every epoch and training stops once validation MIR has not improved for
// `patience` epochs. A non-finite loss or gradient raises
// Error(kNonFiniteLoss) naming the epoch and batch.
TrainResult train(const TrainData& data, const TrainConfig& config, const Validator& validate);

// Checkpoint directory: W_t.nbf, W_v.nbf and model.json.
void save_checkpoint(const std::filesystem::path& dir, const TrainResult& result,
                     const TrainConfig& config);
DualEncoder load_checkpoint(const std::filesystem::path& dir);

}  // namespace negbench::neglearn
