#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace negbench::retrieval {

using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Id-indexed dense embeddings, one row per item. Immutable once built.
class FeatureStore {
 public:
  FeatureStore() = default;
  // Throws Error(kDuplicateId) for repeated ids, kDimMismatch when the id
  // count differs from the row count, kInvalidArgument for non-finite
  // entries or an empty dimension.
  FeatureStore(std::vector<std::string> ids, Matrix matrix);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.cols()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Matrix& matrix() const { return matrix_; }
  std::span<const float> row(std::size_t i) const {
    return {matrix_.data() + i * dim(), dim()};
  }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  // Throws Error(kInvalidArgument) for an unknown id.
  std::size_t index_of(const std::string& id) const;
  std::span<const float> row(const std::string& id) const { return row(index_of(id)); }

 private:
  std::vector<std::string> ids_;
  Matrix matrix_;
  std::unordered_map<std::string, std::size_t> index_;
};

// NBF1: "NBF1", u32 rows, u32 dim, rows*dim little-endian float32, row-major.
void write_nbf1(const std::filesystem::path& path, const Matrix& m);
Matrix read_nbf1(const std::filesystem::path& path);

// Sidecar ids: `item_id<TAB>row_index`, every row named exactly once.
std::filesystem::path default_ids_path(const std::filesystem::path& features);
void save_feature_store(const FeatureStore& store, const std::filesystem::path& features,
                        std::filesystem::path ids_path = {});
FeatureStore load_feature_store(const std::filesystem::path& features,
                                std::filesystem::path ids_path = {});

// Averages frame rows into one row per video. `frame_to_video[i]` names the
// video of frames.row(i); `videos` fixes the output order. Videos without
// frames raise Error(kMissingFrames); frames of unlisted videos raise
// Error(kInvalidArgument).
FeatureStore mean_pool(const FeatureStore& frames,
                       const std::map<std::string, std::string>& frame_to_video,
                       const std::vector<std::string>& videos);

}  // namespace negbench::retrieval
