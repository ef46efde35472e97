#include "negbench/retrieval/scope.hpp"

#include <fstream>
#include <set>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/text/tagger.hpp"
#include "negbench/text/token.hpp"
#include "negbench/text/tokenizer.hpp"

namespace negbench::retrieval {

namespace {

bool is_conjunction(std::string_view w) {
  static const std::set<std::string, std::less<>> kWords = {"and", "or", "but",
                                                            "while", "nor", "whereas"};
  return kWords.count(w) != 0;
}

bool is_aux_word(std::string_view w) {
  return text::is_be_form(w) || text::is_do_form(w) || text::is_have_form(w) ||
         text::is_modal(w) || w == "ca" || w == "wo";
}

std::string restore_clitic(const std::string& w) {
  if (w == "ca") return "can";
  if (w == "wo") return "will";
  return w;
}

}  // namespace

Subqueries split_negated_query(const query::Query& q, const text::CueLexicon& cues) {
  if (q.kind == query::QueryKind::kComposed) {
    if (!q.pos_subquery || !q.neg_subquery) {
      throw Error(Errc::kInvalidArgument, "composed query " + q.qid + " has no subqueries");
    }
    return {*q.pos_subquery, *q.neg_subquery};
  }
  if (q.kind != query::QueryKind::kNegated) {
    throw Error(Errc::kInvalidArgument, "query " + q.qid + " is not negated or composed");
  }
  const auto tokens = text::tokenize(q.text);
  std::vector<std::string> low;
  for (const auto& t : tokens) low.push_back(text::lowercase(t));

  std::size_t cue = low.size();
  for (std::size_t i = 0; i < low.size(); ++i) {
    if (cues.cues.count(low[i])) {
      cue = i;
      break;
    }
  }
  if (cue == low.size()) throw Error(Errc::kNoCue, "query " + q.qid + " has no negation cue");

  std::size_t boundary = cue + 1;
  while (boundary < low.size() && !is_conjunction(low[boundary])) ++boundary;
  const bool to_end = boundary == low.size();

  std::vector<std::string> neg(tokens.begin() + static_cast<std::ptrdiff_t>(cue) + 1,
                               tokens.begin() + static_cast<std::ptrdiff_t>(boundary));
  std::vector<std::string> pos;
  std::size_t pre_end = cue;
  if (pre_end > 0 && text::is_do_form(low[pre_end - 1])) --pre_end;
  for (std::size_t i = 0; i < pre_end; ++i) pos.push_back(restore_clitic(tokens[i]));
  if (!to_end) {
    for (std::size_t i = boundary + 1; i < tokens.size(); ++i) pos.push_back(tokens[i]);
  } else {
    while (!pos.empty() && (is_conjunction(text::lowercase(pos.back())) ||
                            is_aux_word(text::lowercase(pos.back())))) {
      pos.pop_back();
    }
  }
  return {text::detokenize(pos), text::detokenize(neg)};
}

std::map<std::string, Subqueries> read_subquery_splits(std::istream& in) {
  std::map<std::string, Subqueries> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3 || cols[0].empty()) {
      throw Error(Errc::kParse, "splits line " + std::to_string(lineno) +
                                    ": expected qid<TAB>pos_text<TAB>neg_text");
    }
    if (!out.emplace(cols[0], Subqueries{cols[1], cols[2]}).second) {
      throw Error(Errc::kDuplicateId, "split for '" + cols[0] + "' repeats");
    }
  }
  return out;
}

std::map<std::string, Subqueries> read_subquery_splits_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  return read_subquery_splits(in);
}

std::string subquery_splits_to_tsv(const std::map<std::string, Subqueries>& splits) {
  std::string out;
  for (const auto& [qid, s] : splits) out += qid + "\t" + s.pos + "\t" + s.neg + "\n";
  return out;
}

}  // namespace negbench::retrieval
