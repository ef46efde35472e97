#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "negbench/query/caption_index.hpp"
#include "negbench/query/query.hpp"
#include "negbench/text/chunk_parser.hpp"
#include "negbench/text/token.hpp"

namespace negbench::query {

// Split manifest TSV: `video_id<TAB>split`.
std::map<std::string, std::string> read_split_manifest(std::istream& in);
std::map<std::string, std::string> read_split_manifest_file(const std::string& path);

struct RepurposeConfig {
  std::uint64_t seed = 0;
  std::string test_split = "test";
  // Split whose captions supply subjects and VPs for composed queries and
  // whose videos are mined as matches.
  std::string composed_source = "train";
  bool include_prose_template = false;
  bool emit_composed = true;
};

struct RepurposeStats {
  std::size_t captions = 0;
  std::size_t unassigned_captions = 0;  // video missing from the manifest
  std::size_t test_captions = 0;
  std::size_t source_captions = 0;
  std::size_t original = 0;
  std::size_t negated = 0;
  std::size_t negated_from_cue_removal = 0;
  std::size_t composed_candidates = 0;
  std::size_t composed_before_dedup = 0;
  std::size_t composed = 0;
  std::size_t captions_with_cues = 0;  // over all tagged captions
  std::map<std::string, std::size_t> negated_skips;  // reason -> count
  std::map<std::string, std::size_t> composed_skips;
  std::map<std::string, std::size_t> negation_sites;  // site kind -> count

  double cue_prevalence() const;
  nlohmann::ordered_json to_json(std::uint64_t seed) const;
};

struct RepurposeResult {
  std::vector<Query> original;
  std::vector<Query> negated;
  std::vector<Query> composed;
  RepurposeStats stats;
};

// Builds the three query sets. `pretagged` (caption_id -> tagged caption)
// replaces the built-in tagger for the captions it covers. Per-caption
// failures are counted in the stats and skipped; only malformed inputs throw.
RepurposeResult repurpose_dataset(
    std::span<const CaptionRecord> captions,
    const std::map<std::string, std::string>& split_of_video,
    const RepurposeConfig& config,
    const std::map<std::string, text::TaggedCaption>* pretagged = nullptr);

// Writes original.jsonl, negated.jsonl, composed.jsonl and stats.json.
// Returns the paths written.
std::vector<std::filesystem::path> write_bundle(const RepurposeResult& result,
                                                const RepurposeConfig& config,
                                                const std::filesystem::path& dir);

// Re-checks every composed query against the index: relevant ids
// phrase-match the positive VP, word-match nothing of the negative VP, and
// equal the set difference. Returns the qids that fail.
std::vector<std::string> audit_composed(std::span<const Query> composed,
                                        const CaptionIndex& index);

// Base-form VP text ("take selfie") of a chunked VP span.
std::string vp_base_form(const text::TaggedCaption& tc, const text::Span& vp,
                         std::size_t head,
                         const text::Morphology& morph = text::Morphology::builtin());

}  // namespace negbench::query
