#include "negbench/neglearn/losses.hpp"

#include <algorithm>
#include <cmath>

#include "negbench/common/error.hpp"

namespace negbench::neglearn {

void MarginConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(Errc::kInvalidMargins, why); };
  if (!(m0 > 0)) fail("m0 must be positive");
  if (!(0 < m1 && m1 < m2 && m2 < 2)) fail("margins must satisfy 0 < m1 < m2 < 2");
  if (!(0 < m3 && m3 < m4 && m4 < 2)) fail("margins must satisfy 0 < m3 < m4 < 2");
  if (!(lambda1 >= 0 && lambda2 >= 0)) fail("loss weights must be non-negative");
}

std::string_view aux_name(AuxLoss a) {
  switch (a) {
    case AuxLoss::kNone: return "none";
    case AuxLoss::kSnlVideo: return "snl_video";
    case AuxLoss::kSnlQuery: return "snl_query";
    case AuxLoss::kBclVideo: return "bcl_video";
    case AuxLoss::kBclQuery: return "bcl_query";
    case AuxLoss::kBnl: return "bnl";
  }
  return "?";
}

AuxLoss parse_aux(std::string_view name) {
  for (auto a : {AuxLoss::kNone, AuxLoss::kSnlVideo, AuxLoss::kSnlQuery, AuxLoss::kBclVideo,
                 AuxLoss::kBclQuery, AuxLoss::kBnl}) {
    if (aux_name(a) == name) return a;
  }
  throw Error(Errc::kInvalidArgument, "unknown auxiliary loss '" + std::string(name) + "'");
}

double hinge(double x) { return x > 0.0 ? x : 0.0; }

double triplet_term(double s_hard, double s_pos, double m0) {
  return hinge(m0 + s_hard - s_pos);
}

double snl_video_term(double s_xq, double s_xqn, double m1) {
  return hinge(m1 + s_xqn - s_xq);
}

double snl_query_term(double s_qx, double s_qqn, double m) {
  return hinge(m + s_qqn - s_qx);
}

double bcl_video_term(double s_xq, double s_xqn, double m1, double m2) {
  return hinge(m1 + s_xqn - s_xq) + hinge(-m2 - s_xqn + s_xq);
}

double bcl_query_term(double s_qx, double s_qqn, double m3, double m4) {
  return hinge(m3 + s_qqn - s_qx) + hinge(-m4 - s_qqn + s_qx);
}

bool Batch::any_neg() const {
  return std::find(has_neg.begin(), has_neg.end(), true) != has_neg.end();
}

Similarities forward_similarities(const DualEncoder& enc, const Batch& batch) {
  const auto b = static_cast<Eigen::Index>(batch.size());
  if (batch.video.rows() != b || batch.group.size() != batch.size()) {
    throw Error(Errc::kDimMismatch, "batch rows disagree");
  }
  Similarities s;
  s.q_hat = normalize_rows(enc.project_texts(batch.text), &s.q_norm);
  s.x_hat = normalize_rows(enc.project_videos(batch.video), &s.x_norm);
  s.s = s.q_hat * s.x_hat.transpose();
  s.s_xqn = VectorXd::Zero(b);
  s.s_qqn = VectorXd::Zero(b);
  s.n_hat = MatrixXd::Zero(b, s.q_hat.cols());
  s.n_norm = VectorXd::Zero(b);
  if (batch.any_neg()) {
    if (batch.negtext.rows() != b || batch.has_neg.size() != batch.size()) {
      throw Error(Errc::kDimMismatch, "negated rows disagree with the batch");
    }
    const MatrixXd n = enc.project_texts(batch.negtext);
    for (Eigen::Index i = 0; i < b; ++i) {
      if (!batch.has_neg[static_cast<std::size_t>(i)]) continue;
      const double norm = n.row(i).norm();
      if (!(norm > 0.0)) throw Error(Errc::kZeroNorm, "zero-norm negated embedding");
      s.n_norm(i) = norm;
      s.n_hat.row(i) = n.row(i) / norm;
      s.s_xqn(i) = s.n_hat.row(i).dot(s.x_hat.row(i));
      s.s_qqn(i) = s.q_hat.row(i).dot(s.n_hat.row(i));
    }
  }
  return s;
}

TripletResult triplet_loss(const Similarities& sims, const std::vector<int>& group, double m0) {
  const auto b = sims.s.rows();
  TripletResult r;
  r.hardest.assign(static_cast<std::size_t>(b), -1);
  for (Eigen::Index i = 0; i < b; ++i) {
    int best = -1;
    for (Eigen::Index j = 0; j < b; ++j) {
      if (group[static_cast<std::size_t>(j)] == group[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || sims.s(i, j) > sims.s(i, best)) best = static_cast<int>(j);
    }
    if (best < 0) throw Error(Errc::kNoNegatives, "anchor without an in-batch negative");
    r.hardest[static_cast<std::size_t>(i)] = best;
    r.loss += triplet_term(sims.s(i, best), sims.s(i, i), m0);
  }
  r.loss /= static_cast<double>(b);
  return r;
}

namespace {

// d(x/|x|) backpropagated to x, row-wise.
MatrixXd through_normalization(const MatrixXd& d_hat, const MatrixXd& hat, const VectorXd& norm) {
  MatrixXd out(d_hat.rows(), d_hat.cols());
  for (Eigen::Index i = 0; i < d_hat.rows(); ++i) {
    if (norm(i) == 0.0) {
      out.row(i).setZero();
      continue;
    }
    const double along = d_hat.row(i).dot(hat.row(i));
    out.row(i) = (d_hat.row(i) - along * hat.row(i)) / norm(i);
  }
  return out;
}

}  // namespace

LossResult total_loss(const DualEncoder& enc, const Batch& batch, const MarginConfig& margins,
                      AuxLoss aux, bool with_grad) {
  margins.validate();
  const Similarities sims = forward_similarities(enc, batch);
  const auto tri = triplet_loss(sims, batch.group, margins.m0);
  const auto b = static_cast<Eigen::Index>(batch.size());
  const double inv_b = 1.0 / static_cast<double>(b);

  LossResult r;
  r.triplet = tri.loss;
  r.hardest = tri.hardest;

  MatrixXd d_s = MatrixXd::Zero(b, b);
  VectorXd d_xqn = VectorXd::Zero(b), d_qqn = VectorXd::Zero(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const int h = tri.hardest[static_cast<std::size_t>(i)];
    if (margins.m0 + sims.s(i, h) - sims.s(i, i) > 0.0) {
      d_s(i, h) += inv_b;
      d_s(i, i) -= inv_b;
    }
  }

  std::size_t with_neg = 0;
  if (aux != AuxLoss::kNone) {
    for (bool n : batch.has_neg) with_neg += n ? 1 : 0;
  }
  if (with_neg > 0) {
    const double lambda =
        (aux == AuxLoss::kSnlVideo || aux == AuxLoss::kSnlQuery) ? margins.lambda1 : margins.lambda2;
    const double w = lambda / static_cast<double>(with_neg);
    const bool video_pivot = aux == AuxLoss::kSnlVideo || aux == AuxLoss::kBclVideo ||
                             aux == AuxLoss::kBnl;
    const bool query_pivot = aux == AuxLoss::kSnlQuery || aux == AuxLoss::kBclQuery ||
                             aux == AuxLoss::kBnl;
    const bool upper = aux == AuxLoss::kBclVideo || aux == AuxLoss::kBclQuery ||
                       aux == AuxLoss::kBnl;
    const double lo_v = margins.m1, hi_v = margins.m2;
    const double lo_q = aux == AuxLoss::kSnlQuery ? margins.m1 : margins.m3;
    const double hi_q = margins.m4;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < b; ++i) {
      if (!batch.has_neg[static_cast<std::size_t>(i)]) continue;
      const double pos = sims.s(i, i);  // s(x+, q) == s(q, x+)
      if (video_pivot) {
        const double lower = lo_v + sims.s_xqn(i) - pos;
        if (lower > 0) {
          sum += lower;
          d_xqn(i) += w;
          d_s(i, i) -= w;
        }
        const double over = -hi_v - sims.s_xqn(i) + pos;
        if (upper && over > 0) {
          sum += over;
          d_xqn(i) -= w;
          d_s(i, i) += w;
        }
      }
      if (query_pivot) {
        const double lower = lo_q + sims.s_qqn(i) - pos;
        if (lower > 0) {
          sum += lower;
          d_qqn(i) += w;
          d_s(i, i) -= w;
        }
        const double over = -hi_q - sims.s_qqn(i) + pos;
        if (upper && over > 0) {
          sum += over;
          d_qqn(i) -= w;
          d_s(i, i) += w;
        }
      }
    }
    r.aux = sum / static_cast<double>(with_neg);
    r.total = r.triplet + lambda * r.aux;
  } else {
    r.total = r.triplet;
  }
  if (!std::isfinite(r.total)) throw Error(Errc::kNonFiniteLoss, "loss is not finite");
  if (!with_grad) return r;

  MatrixXd d_q = d_s * sims.x_hat;
  MatrixXd d_x = d_s.transpose() * sims.q_hat;
  MatrixXd d_n = MatrixXd::Zero(b, sims.q_hat.cols());
  for (Eigen::Index i = 0; i < b; ++i) {
    if (d_qqn(i) != 0.0) {
      d_q.row(i) += d_qqn(i) * sims.n_hat.row(i);
      d_n.row(i) += d_qqn(i) * sims.q_hat.row(i);
    }
    if (d_xqn(i) != 0.0) {
      d_n.row(i) += d_xqn(i) * sims.x_hat.row(i);
      d_x.row(i) += d_xqn(i) * sims.n_hat.row(i);
    }
  }
  const MatrixXd d_a = through_normalization(d_q, sims.q_hat, sims.q_norm);
  const MatrixXd d_v = through_normalization(d_x, sims.x_hat, sims.x_norm);
  r.grad_wt = batch.text.transpose() * d_a;
  r.grad_wv = batch.video.transpose() * d_v;
  if (with_neg > 0) {
    const MatrixXd d_nraw = through_normalization(d_n, sims.n_hat, sims.n_norm);
    r.grad_wt += batch.negtext.transpose() * d_nraw;
  }
  return r;
}

}  // namespace negbench::neglearn
