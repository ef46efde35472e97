#pragma once

#include <span>

#include <Eigen/Core>

#include "negbench/common/rng.hpp"
#include "negbench/retrieval/feature_store.hpp"

namespace negbench::neglearn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Two linear projections into a shared d-dimensional space. Embeddings are
// L2-normalized, so similarities are cosines.
struct DualEncoder {
  MatrixXd wt;  // d_text x d
  MatrixXd wv;  // d_vid x d

  std::size_t text_dim() const { return static_cast<std::size_t>(wt.rows()); }
  std::size_t video_dim() const { return static_cast<std::size_t>(wv.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(wt.cols()); }

  // Entries drawn from N(0, scale^2).
  static DualEncoder random(std::size_t d_text, std::size_t d_vid, std::size_t d,
                            double scale, Rng& rng);
  // Both projections are identities (requires d_text == d_vid == d).
  static DualEncoder identity(std::size_t d);

  // Projected rows (not normalized). Throws Error(kDimMismatch).
  MatrixXd project_texts(const MatrixXd& features) const;
  MatrixXd project_videos(const MatrixXd& features) const;

  // Normalized embeddings of a whole store, ids preserved.
  retrieval::FeatureStore embed_texts(const retrieval::FeatureStore& store) const;
  retrieval::FeatureStore embed_videos(const retrieval::FeatureStore& store) const;

  bool all_finite() const { return wt.allFinite() && wv.allFinite(); }
};

// Row-wise L2 normalization; throws Error(kZeroNorm) for a zero row.
MatrixXd normalize_rows(const MatrixXd& m, VectorXd* norms = nullptr);

MatrixXd to_double(const retrieval::Matrix& m);

}  // namespace negbench::neglearn
