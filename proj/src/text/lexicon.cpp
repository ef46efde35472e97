#include "negbench/text/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/text/token.hpp"

namespace negbench::text {

// Generated from data/*.tsv at configure time.
extern const char* const kBuiltinLexiconTsv;
extern const char* const kBuiltinIrregularVerbsTsv;

namespace {

template <typename F>
void for_each_row(std::istream& in, const char* what, F&& f) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cols = split_tabs(t);
    f(cols, lineno);
  }
  (void)what;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  return in;
}

}  // namespace

Lexicon Lexicon::parse(std::istream& in) {
  Lexicon lex;
  for_each_row(in, "lexicon", [&](const auto& cols, std::size_t lineno) {
    if (cols.size() != 2 || cols[0].empty()) {
      throw Error(Errc::kParse,
                  "lexicon line " + std::to_string(lineno) +
                      ": expected surface<TAB>tag");
    }
    if (!is_known_tag(cols[1])) {
      throw Error(Errc::kParse, "lexicon line " + std::to_string(lineno) +
                                    ": unknown tag '" + cols[1] + "'");
    }
    auto& tags = lex.entries_[lowercase(cols[0])];
    if (std::find(tags.begin(), tags.end(), cols[1]) == tags.end()) {
      tags.push_back(cols[1]);
    }
  });
  return lex;
}

Lexicon Lexicon::from_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse(in);
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex = [] {
    std::istringstream in(kBuiltinLexiconTsv);
    return parse(in);
  }();
  return lex;
}

const std::vector<std::string>& Lexicon::tags(std::string_view surface) const {
  static const std::vector<std::string> kNone;
  auto it = entries_.find(lowercase(surface));
  return it == entries_.end() ? kNone : it->second;
}

bool Lexicon::has_tag(std::string_view surface, std::string_view tag) const {
  const auto& t = tags(surface);
  return std::find(t.begin(), t.end(), tag) != t.end();
}

IrregularVerbs IrregularVerbs::parse(std::istream& in) {
  IrregularVerbs table;
  for_each_row(in, "irregular verbs", [&](const auto& cols, std::size_t lineno) {
    if (cols.size() != 4 && cols.size() != 5) {
      throw Error(Errc::kParse,
                  "irregular verb line " + std::to_string(lineno) +
                      ": expected lemma<TAB>past<TAB>3sg<TAB>gerund");
    }
    VerbForms f{lowercase(cols[0]), lowercase(cols[1]), lowercase(cols[2]),
                lowercase(cols[3]),
                lowercase(cols.size() == 5 ? cols[4] : cols[1])};
    for (const auto* form : {&f.past, &f.third_singular, &f.gerund,
                             &f.participle}) {
      table.form_to_lemma_.try_emplace(*form, f.lemma);
    }
    table.by_lemma_[f.lemma] = std::move(f);
  });
  return table;
}

IrregularVerbs IrregularVerbs::from_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse(in);
}

const IrregularVerbs& IrregularVerbs::builtin() {
  static const IrregularVerbs table = [] {
    std::istringstream in(kBuiltinIrregularVerbsTsv);
    return parse(in);
  }();
  return table;
}

const VerbForms* IrregularVerbs::find_lemma(std::string_view lemma) const {
  auto it = by_lemma_.find(lowercase(lemma));
  return it == by_lemma_.end() ? nullptr : &it->second;
}

std::optional<std::string> IrregularVerbs::lemma_of(
    std::string_view form) const {
  auto low = lowercase(form);
  if (by_lemma_.count(low)) return low;
  auto it = form_to_lemma_.find(low);
  if (it == form_to_lemma_.end()) return std::nullopt;
  return it->second;
}

}  // namespace negbench::text
