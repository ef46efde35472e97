#include "negbench/query/query.hpp"

#include <fstream>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"

namespace negbench::query {

std::string_view kind_name(QueryKind kind) {
  switch (kind) {
    case QueryKind::kOriginal: return "original";
    case QueryKind::kNegated: return "negated";
    case QueryKind::kComposed: return "composed";
  }
  return "original";
}

QueryKind parse_kind(std::string_view name) {
  if (name == "original") return QueryKind::kOriginal;
  if (name == "negated") return QueryKind::kNegated;
  if (name == "composed") return QueryKind::kComposed;
  throw Error(Errc::kParse, "unknown query kind '" + std::string(name) + "'");
}

void Query::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::kInvalidArgument, "query " + qid + ": " + why);
  };
  if (qid.empty()) fail("empty qid");
  switch (kind) {
    case QueryKind::kOriginal:
      if (relevant_ids.empty()) fail("original query without relevant ids");
      break;
    case QueryKind::kNegated:
      if (!origin_qid) fail("negated query without origin_qid");
      if (known_negative_ids.empty()) {
        fail("negated query must list its origin video as a known negative");
      }
      break;
    case QueryKind::kComposed:
      if (!pos_subquery || !neg_subquery) fail("composed query without subqueries");
      if (relevant_ids.empty()) fail("composed query without relevant ids");
      break;
  }
}

nlohmann::ordered_json to_json(const Query& q) {
  nlohmann::ordered_json j;
  j["qid"] = q.qid;
  j["kind"] = kind_name(q.kind);
  j["text"] = q.text;
  j["origin_qid"] = q.origin_qid ? nlohmann::ordered_json(*q.origin_qid)
                                 : nlohmann::ordered_json(nullptr);
  j["relevant_ids"] = q.relevant_ids;
  j["known_negative_ids"] = q.known_negative_ids;
  j["pos_subquery"] = q.pos_subquery ? nlohmann::ordered_json(*q.pos_subquery)
                                     : nlohmann::ordered_json(nullptr);
  j["neg_subquery"] = q.neg_subquery ? nlohmann::ordered_json(*q.neg_subquery)
                                     : nlohmann::ordered_json(nullptr);
  j["seed_trace"] = q.seed_trace;
  if (q.triplet) {
    j["triplet"] = {{"subject", q.triplet->subject},
                    {"pos_vp", q.triplet->pos_vp},
                    {"neg_vp", q.triplet->neg_vp}};
  }
  if (q.split) j["split"] = *q.split;
  return j;
}

namespace {
std::optional<std::string> opt_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}
}  // namespace

Query query_from_json(const nlohmann::json& j) {
  for (const char* key : {"qid", "kind", "text"}) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw Error(Errc::kParse, std::string("query object missing '") + key + "'");
    }
  }
  Query q;
  q.qid = j.at("qid").get<std::string>();
  q.kind = parse_kind(j.at("kind").get<std::string>());
  q.text = j.at("text").get<std::string>();
  q.origin_qid = opt_string(j, "origin_qid");
  if (j.contains("relevant_ids")) {
    q.relevant_ids = j.at("relevant_ids").get<std::set<std::string>>();
  }
  if (j.contains("known_negative_ids")) {
    q.known_negative_ids = j.at("known_negative_ids").get<std::set<std::string>>();
  }
  q.pos_subquery = opt_string(j, "pos_subquery");
  q.neg_subquery = opt_string(j, "neg_subquery");
  if (j.contains("seed_trace")) q.seed_trace = j.at("seed_trace").get<std::uint64_t>();
  if (auto it = j.find("triplet"); it != j.end() && it->is_object()) {
    q.triplet = Triplet{it->value("subject", ""), it->value("pos_vp", ""),
                        it->value("neg_vp", "")};
  }
  q.split = opt_string(j, "split");
  return q;
}

std::vector<Query> read_queries_jsonl(std::istream& in) {
  std::vector<Query> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(query_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParse,
                  "queries line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(),
                  "queries line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Query> read_queries_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  return read_queries_jsonl(in);
}

std::string queries_to_jsonl(std::span<const Query> queries) {
  std::string out;
  for (const auto& q : queries) {
    out += to_json(q).dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace negbench::query
