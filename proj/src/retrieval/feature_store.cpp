#include "negbench/retrieval/feature_store.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"

namespace negbench::retrieval {

FeatureStore::FeatureStore(std::vector<std::string> ids, Matrix matrix)
    : ids_(std::move(ids)), matrix_(std::move(matrix)) {
  if (static_cast<Eigen::Index>(ids_.size()) != matrix_.rows()) {
    throw Error(Errc::kDimMismatch, "feature store has " + std::to_string(ids_.size()) +
                                        " ids for " + std::to_string(matrix_.rows()) + " rows");
  }
  if (matrix_.cols() == 0) throw Error(Errc::kInvalidArgument, "feature dimension is 0");
  if (!matrix_.allFinite()) throw Error(Errc::kInvalidArgument, "non-finite feature entry");
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(Errc::kDuplicateId, "feature id '" + ids_[i] + "' repeats");
    }
  }
}

std::size_t FeatureStore::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::kInvalidArgument, "no features for '" + id + "'");
  return it->second;
}

namespace {

constexpr char kMagic[4] = {'N', 'B', 'F', '1'};

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

void put_u32(std::string& out, std::uint32_t v) {
  v = to_le(v);
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v;
  std::memcpy(&v, in.data() + at, 4);
  return to_le(v);
}

}  // namespace

void write_nbf1(const std::filesystem::path& path, const Matrix& m) {
  std::string out(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  out.reserve(out.size() + 4 * static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    put_u32(out, std::bit_cast<std::uint32_t>(m.data()[i]));
  }
  write_file(path, out);
}

Matrix read_nbf1(const std::filesystem::path& path) {
  const std::string in = read_file(path);
  if (in.size() < 12 || std::memcmp(in.data(), kMagic, 4) != 0) {
    throw Error(Errc::kParse, path.string() + ": not an NBF1 file");
  }
  const std::uint64_t rows = get_u32(in, 4), dim = get_u32(in, 8);
  if (in.size() != 12 + 4 * rows * dim) {
    throw Error(Errc::kParse, path.string() + ": size does not match header");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < rows * dim; ++i) {
    m.data()[i] = std::bit_cast<float>(get_u32(in, 12 + 4 * i));
  }
  return m;
}

std::filesystem::path default_ids_path(const std::filesystem::path& features) {
  return features.string() + ".ids.tsv";
}

void save_feature_store(const FeatureStore& store, const std::filesystem::path& features,
                        std::filesystem::path ids_path) {
  if (ids_path.empty()) ids_path = default_ids_path(features);
  write_nbf1(features, store.matrix());
  std::string ids;
  for (std::size_t i = 0; i < store.size(); ++i) {
    ids += store.ids()[i] + "\t" + std::to_string(i) + "\n";
  }
  write_file(ids_path, ids);
}

FeatureStore load_feature_store(const std::filesystem::path& features,
                                std::filesystem::path ids_path) {
  if (ids_path.empty()) ids_path = default_ids_path(features);
  Matrix m = read_nbf1(features);
  std::vector<std::string> ids(static_cast<std::size_t>(m.rows()));
  std::vector<bool> seen(ids.size(), false);
  std::istringstream in(read_file(ids_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    std::size_t row = 0;
    bool ok = cols.size() == 2 && !cols[0].empty();
    if (ok) {
      try {
        std::size_t used = 0;
        row = std::stoul(cols[1], &used);
        ok = used == cols[1].size();
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      throw Error(Errc::kParse, ids_path.string() + " line " + std::to_string(lineno) +
                                    ": expected item_id<TAB>row_index");
    }
    if (row >= ids.size() || seen[row]) {
      throw Error(Errc::kParse, ids_path.string() + " line " + std::to_string(lineno) +
                                    ": row index out of range or repeated");
    }
    seen[row] = true;
    ids[row] = cols[0];
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw Error(Errc::kParse, ids_path.string() + ": row " + std::to_string(i) + " has no id");
    }
  }
  return FeatureStore(std::move(ids), std::move(m));
}

FeatureStore mean_pool(const FeatureStore& frames,
                       const std::map<std::string, std::string>& frame_to_video,
                       const std::vector<std::string>& videos) {
  std::unordered_map<std::string, std::size_t> out_row;
  for (std::size_t i = 0; i < videos.size(); ++i) out_row.emplace(videos[i], i);
  const auto d = static_cast<Eigen::Index>(frames.dim());
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(videos.size()), d);
  std::vector<std::size_t> counts(videos.size(), 0);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& fid = frames.ids()[f];
    auto v = frame_to_video.find(fid);
    if (v == frame_to_video.end()) {
      throw Error(Errc::kInvalidArgument, "frame '" + fid + "' has no video");
    }
    auto r = out_row.find(v->second);
    if (r == out_row.end()) {
      throw Error(Errc::kInvalidArgument, "frame '" + fid + "' maps to unlisted video '" +
                                              v->second + "'");
    }
    auto row = frames.row(f);
    for (Eigen::Index k = 0; k < d; ++k) {
      sums(static_cast<Eigen::Index>(r->second), k) += row[static_cast<std::size_t>(k)];
    }
    ++counts[r->second];
  }
  Matrix pooled(static_cast<Eigen::Index>(videos.size()), d);
  for (std::size_t i = 0; i < videos.size(); ++i) {
    if (counts[i] == 0) {
      throw Error(Errc::kMissingFrames, "video '" + videos[i] + "' has no frames");
    }
    pooled.row(static_cast<Eigen::Index>(i)) =
        (sums.row(static_cast<Eigen::Index>(i)) / static_cast<double>(counts[i])).cast<float>();
  }
  return FeatureStore(videos, std::move(pooled));
}

}  // namespace negbench::retrieval
