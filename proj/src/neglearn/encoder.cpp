#include "negbench/neglearn/encoder.hpp"

#include "negbench/common/error.hpp"

namespace negbench::neglearn {

DualEncoder DualEncoder::random(std::size_t d_text, std::size_t d_vid, std::size_t d,
                                double scale, Rng& rng) {
  DualEncoder e;
  e.wt.resize(static_cast<Eigen::Index>(d_text), static_cast<Eigen::Index>(d));
  e.wv.resize(static_cast<Eigen::Index>(d_vid), static_cast<Eigen::Index>(d));
  // Filled in a fixed order so that the stream does not depend on Eigen.
  for (Eigen::Index i = 0; i < e.wt.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.wt.cols(); ++j) e.wt(i, j) = scale * rng.normal();
  }
  for (Eigen::Index i = 0; i < e.wv.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.wv.cols(); ++j) e.wv(i, j) = scale * rng.normal();
  }
  return e;
}

DualEncoder DualEncoder::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return DualEncoder{MatrixXd::Identity(n, n), MatrixXd::Identity(n, n)};
}

namespace {

void check_cols(const MatrixXd& features, const MatrixXd& w, const char* what) {
  if (features.cols() != w.rows()) {
    throw Error(Errc::kDimMismatch, std::string(what) + " features have " +
                                        std::to_string(features.cols()) + " dims, encoder expects " +
                                        std::to_string(w.rows()));
  }
}

retrieval::FeatureStore embed(const retrieval::FeatureStore& store, const MatrixXd& w,
                              const char* what) {
  MatrixXd f = to_double(store.matrix());
  check_cols(f, w, what);
  MatrixXd e = normalize_rows(f * w);
  return retrieval::FeatureStore(store.ids(), e.cast<float>());
}

}  // namespace

MatrixXd DualEncoder::project_texts(const MatrixXd& features) const {
  check_cols(features, wt, "text");
  return features * wt;
}

MatrixXd DualEncoder::project_videos(const MatrixXd& features) const {
  check_cols(features, wv, "video");
  return features * wv;
}

retrieval::FeatureStore DualEncoder::embed_texts(const retrieval::FeatureStore& store) const {
  return embed(store, wt, "text");
}

retrieval::FeatureStore DualEncoder::embed_videos(const retrieval::FeatureStore& store) const {
  return embed(store, wv, "video");
}

MatrixXd normalize_rows(const MatrixXd& m, VectorXd* norms) {
  MatrixXd out(m.rows(), m.cols());
  if (norms) norms->resize(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    if (!(n > 0.0)) throw Error(Errc::kZeroNorm, "zero-norm embedding");
    out.row(i) = m.row(i) / n;
    if (norms) (*norms)(i) = n;
  }
  return out;
}

MatrixXd to_double(const retrieval::Matrix& m) { return m.cast<double>(); }

}  // namespace negbench::neglearn
