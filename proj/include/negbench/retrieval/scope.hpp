#pragma once

#include <istream>
#include <map>
#include <string>

#include "negbench/query/query.hpp"
#include "negbench/text/cues.hpp"

namespace negbench::retrieval {

struct Subqueries {
  std::string pos;
  std::string neg;
};

// Positive/negative parts of a negated or composed query. Composed queries
// carry theirs. For negated queries the scope runs from the first cue to the
// next coordinating conjunction (or the end); the scope minus the cue is the
// negative part and the rest, with the conjunction dropped, the positive.
// Throws Error(kNoCue) when a negated query has no cue, and
// Error(kInvalidArgument) for original queries.
Subqueries split_negated_query(const query::Query& q,
                               const text::CueLexicon& cues = text::CueLexicon::standard());

// External split file: `qid<TAB>pos_text<TAB>neg_text`.
std::map<std::string, Subqueries> read_subquery_splits(std::istream& in);
std::map<std::string, Subqueries> read_subquery_splits_file(const std::string& path);
std::string subquery_splits_to_tsv(const std::map<std::string, Subqueries>& splits);

}  // namespace negbench::retrieval
