#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "negbench/neglearn/encoder.hpp"

namespace negbench::neglearn {

struct MarginConfig {
  double m0 = 0.2;
  double m1 = 0.1;
  double m2 = 0.6;
  double m3 = 0.1;
  double m4 = 0.3;
  double lambda1 = 1e-3;
  double lambda2 = 1e-3;

  // m0 > 0, 0 < m1 < m2 < 2, 0 < m3 < m4 < 2, lambdas >= 0; otherwise
  // Error(kInvalidMargins).
  void validate() const;
};

enum class AuxLoss {
  kNone,
  kSnlVideo,  // max(0, m1 + s(x+,q-) - s(x+,q)), weight lambda1
  kSnlQuery,  // max(0, m1 + s(q,q-) - s(q,x+)), weight lambda1
  kBclVideo,  // two-sided band [m1, m2] on s(x+,q) - s(x+,q-), weight lambda2
  kBclQuery,  // two-sided band [m3, m4] on s(q,x+) - s(q,q-), weight lambda2
  kBnl,       // kBclVideo + kBclQuery, weight lambda2
};

std::string_view aux_name(AuxLoss a);
AuxLoss parse_aux(std::string_view name);
inline bool needs_negatives(AuxLoss a) { return a != AuxLoss::kNone; }

// Scalar forms. Hinges have zero subgradient at the kink.
double hinge(double x);
double triplet_term(double s_hard, double s_pos, double m0);
double snl_video_term(double s_xq, double s_xqn, double m1);
double snl_query_term(double s_qx, double s_qqn, double m);
double bcl_video_term(double s_xq, double s_xqn, double m1, double m2);
double bcl_query_term(double s_qx, double s_qqn, double m3, double m4);

// B paired samples. Rows of `video` belong to the caption in the same row;
// samples sharing a `group` (video identity) are never each other's
// negatives. `negtext` rows are used only where has_neg is set.
struct Batch {
  MatrixXd text;
  MatrixXd video;
  MatrixXd negtext;
  std::vector<bool> has_neg;
  std::vector<int> group;

  std::size_t size() const { return static_cast<std::size_t>(text.rows()); }
  bool any_neg() const;
};

struct Similarities {
  MatrixXd s;      // s(i, j) = s(x_j, q_i)
  VectorXd s_xqn;  // s(x_i, q-_i), 0 where no negative
  VectorXd s_qqn;  // s(q_i, q-_i), 0 where no negative
  // Normalized embeddings and raw norms, kept for the backward pass.
  MatrixXd q_hat, x_hat, n_hat;
  VectorXd q_norm, x_norm, n_norm;
};

// Throws Error(kDimMismatch) or Error(kZeroNorm).
Similarities forward_similarities(const DualEncoder& enc, const Batch& batch);

struct TripletResult {
  double loss = 0.0;          // batch mean
  std::vector<int> hardest;   // per anchor caption
};

// Hard-negative triplet loss over caption anchors. Throws Error(kNoNegatives)
// when some anchor has no in-batch non-matching video.
TripletResult triplet_loss(const Similarities& sims, const std::vector<int>& group, double m0);

struct LossResult {
  double total = 0.0;
  double triplet = 0.0;
  double aux = 0.0;  // unweighted mean over samples with a negative
  std::vector<int> hardest;
  MatrixXd grad_wt;
  MatrixXd grad_wv;
};

// Triplet loss plus the weighted auxiliary loss, with analytic gradients
// through the normalization when `with_grad` is set.
LossResult total_loss(const DualEncoder& enc, const Batch& batch, const MarginConfig& margins,
                      AuxLoss aux, bool with_grad = true);

}  // namespace negbench::neglearn
