#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace negbench::text {

// surface -> candidate tags, first tag is the default reading. Read from TSV
// `surface<TAB>tag`, one reading per line; '#' starts a comment line.
class Lexicon {
 public:
  static Lexicon parse(std::istream& in);
  static Lexicon from_file(const std::string& path);
  // The lexicon shipped in data/lexicon.tsv, compiled into the library.
  static const Lexicon& builtin();

  // Lookup is case-insensitive; an empty vector means unknown word.
  const std::vector<std::string>& tags(std::string_view surface) const;
  bool has_tag(std::string_view surface, std::string_view tag) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct VerbForms {
  std::string lemma;
  std::string past;
  std::string third_singular;
  std::string gerund;
  std::string participle;
};

// Irregular-verb table, TSV `lemma<TAB>past<TAB>3sg<TAB>gerund` with an
// optional fifth past-participle column (defaults to the past form).
class IrregularVerbs {
 public:
  static IrregularVerbs parse(std::istream& in);
  static IrregularVerbs from_file(const std::string& path);
  static const IrregularVerbs& builtin();

  const VerbForms* find_lemma(std::string_view lemma) const;
  // Any inflected form (past, 3sg, gerund, participle) back to its lemma.
  std::optional<std::string> lemma_of(std::string_view form) const;

 private:
  std::map<std::string, VerbForms, std::less<>> by_lemma_;
  std::map<std::string, std::string, std::less<>> form_to_lemma_;
};

}  // namespace negbench::text
