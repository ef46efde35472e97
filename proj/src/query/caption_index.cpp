#include "negbench/query/caption_index.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "negbench/common/error.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/text/token.hpp"
#include "negbench/text/tokenizer.hpp"

namespace negbench::query {

std::vector<CaptionRecord> read_captions_tsv(std::istream& in) {
  std::vector<CaptionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
      throw Error(Errc::kParse, "captions line " + std::to_string(lineno) +
                                    ": expected video_id<TAB>caption_id<TAB>text");
    }
    out.push_back(CaptionRecord{cols[0], cols[1], cols[2]});
  }
  return out;
}

std::vector<CaptionRecord> read_captions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  return read_captions_tsv(in);
}

const Stopwords& Stopwords::standard() {
  static const Stopwords s{{
      // determiners
      "a", "an", "the", "this", "that", "these", "those", "some", "any", "each",
      "every", "another", "all", "both", "either", "neither",
      // prepositions and particles
      "in", "on", "at", "with", "without", "by", "for", "from", "of", "about",
      "above", "across", "after", "against", "along", "among", "around",
      "before", "behind", "below", "beneath", "beside", "between", "beyond",
      "during", "inside", "into", "near", "onto", "outside", "over", "through",
      "toward", "towards", "under", "underneath", "until", "upon", "to", "as",
      "like", "than", "up", "down", "out", "off", "away", "back",
      // pronouns
      "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us",
      "them", "my", "your", "his", "its", "our", "their", "himself",
      "herself", "itself", "themselves", "someone", "something", "one",
      // conjunctions
      "and", "or", "but", "nor", "while", "because", "so", "then",
      // be / do / have
      "be", "is", "are", "was", "were", "am", "been", "being", "'s", "'re",
      "'m", "do", "does", "did", "doing", "done", "have", "has", "had",
      "having",
      // cues
      "no", "not", "n't", "never", "none", "nobody", "nothing",
  }};
  return s;
}

bool Stopwords::contains(std::string_view w) const {
  return words.find(w) != words.end();
}

namespace {
bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isalnum(c) != 0; });
}
}  // namespace

std::vector<std::string> CaptionIndex::content_lemmas(std::string_view text) const {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  for (const auto& tok : text::tokenize(text)) {
    const std::string low = text::lowercase(tok);
    if (!has_alnum(low) || stopwords_->contains(low)) continue;
    std::string lemma = morph_->word_lemma(low);
    if (stopwords_->contains(lemma)) continue;
    out.push_back(std::move(lemma));
  }
  return out;
}

CaptionIndex CaptionIndex::build(std::span<const CaptionRecord> captions,
                                 const text::Morphology& morph,
                                 const Stopwords& stopwords) {
  if (captions.empty()) throw Error(Errc::kEmptyCorpus, "no captions to index");
  CaptionIndex idx;
  idx.morph_ = &morph;
  idx.stopwords_ = &stopwords;
  std::unordered_set<std::string> seen;
  for (const auto& c : captions) {
    if (!seen.insert(c.caption_id).second) {
      throw Error(Errc::kDuplicateId, "caption id '" + c.caption_id + "' repeats");
    }
  }
  idx.captions_.assign(captions.begin(), captions.end());
  idx.lemmas_.reserve(captions.size());
  for (std::size_t ci = 0; ci < idx.captions_.size(); ++ci) {
    std::vector<std::string> lemmas;
    try {
      lemmas = idx.content_lemmas(idx.captions_[ci].text);
    } catch (const Error&) {
      // Empty captions index as nothing.
    }
    for (std::size_t p = 0; p < lemmas.size(); ++p) {
      idx.lemma_videos_[lemmas[p]].insert(idx.captions_[ci].video_id);
      idx.postings_[lemmas[p]].push_back(Posting{ci, p});
    }
    idx.lemmas_.push_back(std::move(lemmas));
  }
  return idx;
}

std::set<std::string> CaptionIndex::phrase_match(
    std::span<const std::string> lemmas) const {
  std::set<std::string> out;
  if (lemmas.empty()) return out;
  auto first = postings_.find(lemmas[0]);
  if (first == postings_.end()) return out;
  // (caption, start position) candidates, filtered term by term against the
  // postings of each later lemma at the shifted position.
  std::vector<Posting> candidates = first->second;
  for (std::size_t k = 1; k < lemmas.size() && !candidates.empty(); ++k) {
    auto it = postings_.find(lemmas[k]);
    if (it == postings_.end()) return out;
    std::set<std::pair<std::size_t, std::size_t>> at;
    for (const auto& p : it->second) at.emplace(p.caption, p.position);
    std::vector<Posting> kept;
    for (const auto& c : candidates) {
      if (at.count({c.caption, c.position + k})) kept.push_back(c);
    }
    candidates = std::move(kept);
  }
  for (const auto& c : candidates) out.insert(captions_[c.caption].video_id);
  return out;
}

std::set<std::string> CaptionIndex::word_match(
    std::span<const std::string> lemmas) const {
  std::set<std::string> out;
  for (const auto& l : lemmas) {
    const auto& v = videos_with(l);
    out.insert(v.begin(), v.end());
  }
  return out;
}

const std::set<std::string>& CaptionIndex::videos_with(std::string_view lemma) const {
  static const std::set<std::string> kEmpty;
  auto it = lemma_videos_.find(lemma);
  return it == lemma_videos_.end() ? kEmpty : it->second;
}

MatchedVideos find_matched_videos(std::string_view pos_vp, std::string_view neg_vp,
                                  const CaptionIndex& index) {
  MatchedVideos m;
  m.positives = index.phrase_match(index.content_lemmas(pos_vp));
  m.negatives = index.word_match(index.content_lemmas(neg_vp));
  std::set_difference(m.positives.begin(), m.positives.end(), m.negatives.begin(),
                      m.negatives.end(), std::inserter(m.relevant, m.relevant.end()));
  if (m.relevant.empty()) {
    throw Error(Errc::kEmptyMatch, "no video matches '" + std::string(pos_vp) +
                                       "' without '" + std::string(neg_vp) + "'");
  }
  return m;
}

}  // namespace negbench::query
