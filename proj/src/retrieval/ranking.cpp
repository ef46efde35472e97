#include "negbench/retrieval/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "negbench/common/error.hpp"
#include "negbench/common/parallel.hpp"
#include "negbench/common/text_io.hpp"

namespace negbench::retrieval {

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::kDimMismatch, "cosine of " + std::to_string(a.size()) + "-d and " +
                                        std::to_string(b.size()) + "-d vectors");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(Errc::kZeroNorm, "cosine of a zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void sort_ranking(std::vector<ScoredItem>& items, std::optional<std::size_t> k) {
  auto before = [](const ScoredItem& x, const ScoredItem& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.id < y.id;
  };
  if (k && *k < items.size()) {
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(*k),
                      items.end(), before);
    items.resize(*k);
  } else {
    std::sort(items.begin(), items.end(), before);
  }
}

namespace {

void check_dim(std::span<const float> v, const FeatureStore& store) {
  if (v.size() != store.dim()) {
    throw Error(Errc::kDimMismatch, "query has " + std::to_string(v.size()) +
                                        " dims, store has " + std::to_string(store.dim()));
  }
}

}  // namespace

Ranking rank(std::span<const float> query, const FeatureStore& store,
             std::optional<std::size_t> k, std::string qid) {
  return boolean_rerank(query, std::nullopt, store, k, std::move(qid));
}

Ranking boolean_rerank(std::span<const float> pos, std::optional<std::span<const float>> neg,
                       const FeatureStore& store, std::optional<std::size_t> k,
                       std::string qid) {
  check_dim(pos, store);
  if (neg) check_dim(*neg, store);
  Ranking r;
  r.qid = std::move(qid);
  r.items.resize(store.size());
  parallel_for(store.size(), [&](std::size_t i) {
    const auto row = store.row(i);
    double s = cosine(pos, row);
    if (neg) s -= cosine(*neg, row);
    r.items[i] = ScoredItem{store.ids()[i], s};
  });
  sort_ranking(r.items, k);
  return r;
}

std::string rankings_to_jsonl(std::span<const Ranking> rankings) {
  std::string out;
  for (const auto& r : rankings) {
    nlohmann::ordered_json j;
    j["qid"] = r.qid;
    auto& items = j["items"] = nlohmann::ordered_json::array();
    for (const auto& it : r.items) items.push_back({{"id", it.id}, {"score", it.score}});
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<Ranking> read_rankings_jsonl(std::istream& in) {
  std::vector<Ranking> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Ranking r;
      r.qid = j.at("qid").get<std::string>();
      for (const auto& it : j.at("items")) {
        r.items.push_back({it.at("id").get<std::string>(), it.at("score").get<double>()});
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParse, "rankings line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Ranking> read_rankings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  return read_rankings_jsonl(in);
}

}  // namespace negbench::retrieval
