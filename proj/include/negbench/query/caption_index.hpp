#pragma once

#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "negbench/text/morphology.hpp"

namespace negbench::query {

struct CaptionRecord {
  std::string video_id;
  std::string caption_id;
  std::string text;
};

// captions TSV: `video_id<TAB>caption_id<TAB>text`.
std::vector<CaptionRecord> read_captions_tsv(std::istream& in);
std::vector<CaptionRecord> read_captions_file(const std::string& path);

// Words that never count as content: determiners, prepositions, pronouns,
// conjunctions, be/do/have forms, negation cues and punctuation.
struct Stopwords {
  std::set<std::string, std::less<>> words;
  static const Stopwords& standard();
  bool contains(std::string_view w) const;
};

// Inverted index over caption content lemmas, with positions for phrase
// queries. Positions count content words only, so "takes a selfie" and
// "taking selfie" both hold the phrase (take, selfie).
class CaptionIndex {
 public:
  // Throws Error(kEmptyCorpus) for no captions, Error(kDuplicateId) for a
  // repeated caption id.
  static CaptionIndex build(std::span<const CaptionRecord> captions,
                            const text::Morphology& morph = text::Morphology::builtin(),
                            const Stopwords& stopwords = Stopwords::standard());

  // Lowercased content lemmas of free text under this index's rules.
  std::vector<std::string> content_lemmas(std::string_view text) const;

  // Videos with a caption holding `lemmas` contiguously and in order.
  std::set<std::string> phrase_match(std::span<const std::string> lemmas) const;
  // Videos with a caption containing any of `lemmas`.
  std::set<std::string> word_match(std::span<const std::string> lemmas) const;
  const std::set<std::string>& videos_with(std::string_view lemma) const;

  std::size_t caption_count() const { return captions_.size(); }
  const CaptionRecord& caption(std::size_t i) const { return captions_[i]; }
  const std::vector<std::string>& caption_lemmas(std::size_t i) const {
    return lemmas_[i];
  }

 private:
  struct Posting {
    std::size_t caption;
    std::size_t position;
  };

  const text::Morphology* morph_ = nullptr;
  const Stopwords* stopwords_ = nullptr;
  std::vector<CaptionRecord> captions_;
  std::vector<std::vector<std::string>> lemmas_;
  std::map<std::string, std::set<std::string>, std::less<>> lemma_videos_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

struct MatchedVideos {
  std::set<std::string> positives;  // phrase-match the positive VP
  std::set<std::string> negatives;  // word-match any word of the negative VP
  std::set<std::string> relevant;   // positives \ negatives
};

// Throws Error(kEmptyMatch) when the set difference is empty; callers discard
// the composed query.
MatchedVideos find_matched_videos(std::string_view pos_vp, std::string_view neg_vp,
                                  const CaptionIndex& index);

}  // namespace negbench::query
