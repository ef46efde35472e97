#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace negbench::query {

// Source triplet of a composed query, kept so matched videos can be
// re-verified against the caption index.
struct Triplet {
  std::string subject;
  std::string pos_vp;
  std::string neg_vp;
};

enum class QueryKind { kOriginal, kNegated, kComposed };

std::string_view kind_name(QueryKind kind);
QueryKind parse_kind(std::string_view name);

struct Query {
  std::string qid;
  QueryKind kind = QueryKind::kOriginal;
  std::string text;
  std::optional<std::string> origin_qid;
  std::set<std::string> relevant_ids;
  std::set<std::string> known_negative_ids;
  std::optional<std::string> pos_subquery;
  std::optional<std::string> neg_subquery;
  std::uint64_t seed_trace = 0;
  std::optional<Triplet> triplet;  // composed queries only
  // Optional partition tag ("train", "val", "test"); not part of the
  // mandatory schema.
  std::optional<std::string> split;

  // Checks the per-kind invariants; throws Error(kInvalidArgument).
  void validate() const;
};

nlohmann::ordered_json to_json(const Query& q);
Query query_from_json(const nlohmann::json& j);

// JSONL: one object per line, `qid`, `kind` and `text` mandatory.
std::vector<Query> read_queries_jsonl(std::istream& in);
std::vector<Query> read_queries_file(const std::string& path);
std::string queries_to_jsonl(std::span<const Query> queries);

}  // namespace negbench::query
