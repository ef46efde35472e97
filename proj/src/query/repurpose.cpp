#include "negbench/query/repurpose.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "negbench/common/error.hpp"
#include "negbench/common/parallel.hpp"
#include "negbench/common/rng.hpp"
#include "negbench/common/text_io.hpp"
#include "negbench/query/composer.hpp"
#include "negbench/query/negator.hpp"
#include "negbench/text/cues.hpp"
#include "negbench/text/tagger.hpp"
#include "negbench/text/tokenizer.hpp"

namespace negbench::query {

std::map<std::string, std::string> read_split_manifest(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw Error(Errc::kParse, "split line " + std::to_string(lineno) +
                                    ": expected video_id<TAB>split");
    }
    auto [it, inserted] = out.emplace(cols[0], cols[1]);
    if (!inserted && it->second != cols[1]) {
      throw Error(Errc::kDuplicateId,
                  "video '" + cols[0] + "' assigned to two splits");
    }
  }
  return out;
}

std::map<std::string, std::string> read_split_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  return read_split_manifest(in);
}

double RepurposeStats::cue_prevalence() const {
  const std::size_t tagged = captions - unassigned_captions;
  return tagged == 0 ? 0.0
                     : static_cast<double>(captions_with_cues) / static_cast<double>(tagged);
}

nlohmann::ordered_json RepurposeStats::to_json(std::uint64_t seed) const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["captions"] = captions;
  j["unassigned_captions"] = unassigned_captions;
  j["test_captions"] = test_captions;
  j["source_captions"] = source_captions;
  j["counts"] = {{"original", original},
                 {"negated", negated},
                 {"composed", composed}};
  j["negated_from_cue_removal"] = negated_from_cue_removal;
  j["negation_sites"] = negation_sites;
  j["composed_candidates"] = composed_candidates;
  j["composed_before_dedup"] = composed_before_dedup;
  j["skip_reasons"] = {{"negated", negated_skips}, {"composed", composed_skips}};
  j["cue_prevalence"] = {{"captions_with_cues", captions_with_cues},
                         {"fraction", cue_prevalence()}};
  return j;
}

namespace {

std::string_view site_name(SiteKind k) {
  switch (k) {
    case SiteKind::kAux: return "aux";
    case SiteKind::kFiniteVerb: return "finite_verb";
    case SiteKind::kNonFiniteVerb: return "non_finite_verb";
    case SiteKind::kWith: return "with";
  }
  return "?";
}

std::string join_lower(const text::TaggedCaption& tc, const text::Span& s) {
  std::vector<std::string> words;
  for (std::size_t i = s.begin; i < s.end; ++i) {
    words.push_back(text::lowercase(tc.tokens[i].surface));
  }
  return text::detokenize(words);
}

struct VpItem {
  std::string subject;
  std::string vp;
};

// Per-caption outcome, filled in parallel and merged in caption order.
struct CaptionWork {
  bool assigned = false;
  bool tagged = false;
  bool has_cue = false;
  bool is_test = false;
  bool is_source = false;
  std::optional<Query> negated;
  std::string negated_via;  // site kind or "cue_removal"
  std::string negated_skip;
  std::vector<VpItem> vps;
};

std::vector<VpItem> extract_vps(const text::TaggedCaption& tc,
                                const text::ChunkGrammar& grammar,
                                const text::Morphology& morph) {
  std::vector<VpItem> out;
  const auto tree = text::chunk_parse(tc, grammar);
  for (const auto& p : text::extract_subject_vp_pairs(tc, tree)) {
    const auto& head = tc.tokens[p.vp_head_verb];
    // Passives and copulas do not read as "doing X".
    if (head.tag == "VBN" || text::is_be_form(text::lowercase(head.surface))) continue;
    out.push_back({join_lower(tc, p.subject), vp_base_form(tc, p.vp, p.vp_head_verb, morph)});
  }
  return out;
}

}  // namespace

std::string vp_base_form(const text::TaggedCaption& tc, const text::Span& vp,
                         std::size_t head, const text::Morphology& morph) {
  std::vector<std::string> words;
  for (std::size_t i = vp.begin; i < vp.end; ++i) {
    std::string w = text::lowercase(tc.tokens[i].surface);
    words.push_back(i == head ? morph.verb_lemma(w) : w);
  }
  return text::detokenize(words);
}

RepurposeResult repurpose_dataset(
    std::span<const CaptionRecord> captions,
    const std::map<std::string, std::string>& split_of_video,
    const RepurposeConfig& config,
    const std::map<std::string, text::TaggedCaption>* pretagged) {
  if (captions.empty()) throw Error(Errc::kEmptyCorpus, "no captions");
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& c : captions) {
      if (!seen.insert(c.caption_id).second) {
        throw Error(Errc::kDuplicateId, "caption id '" + c.caption_id + "' repeats");
      }
    }
  }

  const auto& morph = text::Morphology::builtin();
  const auto& cues = text::CueLexicon::standard();
  const text::Tagger tagger;
  const auto grammar = text::ChunkGrammar::builtin();

  std::vector<CaptionWork> work(captions.size());
  parallel_for(captions.size(), [&](std::size_t i) {
    const auto& rec = captions[i];
    auto& w = work[i];
    auto split = split_of_video.find(rec.video_id);
    if (split == split_of_video.end()) return;
    w.assigned = true;
    w.is_test = split->second == config.test_split;
    w.is_source = config.emit_composed && split->second == config.composed_source;

    text::TaggedCaption tc;
    try {
      if (pretagged != nullptr) {
        if (auto it = pretagged->find(rec.caption_id); it != pretagged->end()) {
          tc = it->second;
        }
      }
      if (tc.tokens.empty()) {
        tc = tagger.tag(text::tokenize(rec.text), rec.caption_id, rec.video_id);
      }
      tc.caption_id = rec.caption_id;
      tc.video_id = rec.video_id;
    } catch (const Error& e) {
      w.negated_skip = std::string(errc_name(e.code()));
      return;
    }
    w.tagged = true;
    w.has_cue = !text::detect_negation_cues(tc, cues).empty();

    if (w.is_test) {
      const std::uint64_t seed = derive_seed(config.seed, "negate", rec.caption_id);
      try {
        Query q;
        q.qid = rec.caption_id + "#neg";
        q.kind = QueryKind::kNegated;
        q.origin_qid = rec.caption_id;
        q.known_negative_ids = {rec.video_id};
        q.seed_trace = seed;
        if (w.has_cue) {
          q.text = denegate_caption(tc, morph, cues);
          w.negated_via = "cue_removal";
        } else {
          Rng rng(seed);
          auto neg = negate_caption(tc, rng, morph, cues);
          q.text = neg.text;
          for (const auto& s : negatable_sites(tc)) {
            if (s.token == neg.site) w.negated_via = site_name(s.kind);
          }
        }
        w.negated = std::move(q);
      } catch (const Error& e) {
        w.negated_skip = std::string(errc_name(e.code()));
      }
    }
    if (w.is_source && !w.has_cue) w.vps = extract_vps(tc, grammar, morph);
  });

  RepurposeResult result;
  auto& st = result.stats;
  st.captions = captions.size();
  for (std::size_t i = 0; i < captions.size(); ++i) {
    const auto& rec = captions[i];
    const auto& w = work[i];
    if (!w.assigned) {
      ++st.unassigned_captions;
      continue;
    }
    if (w.has_cue) ++st.captions_with_cues;
    if (w.is_source) ++st.source_captions;
    if (!w.is_test) continue;
    ++st.test_captions;
    if (w.tagged) {
      Query q;
      q.qid = rec.caption_id;
      q.kind = QueryKind::kOriginal;
      q.text = rec.text;
      q.relevant_ids = {rec.video_id};
      result.original.push_back(std::move(q));
    }
    if (w.negated) {
      result.negated.push_back(*w.negated);
      ++st.negation_sites[w.negated_via];
      if (w.negated_via == "cue_removal") ++st.negated_from_cue_removal;
    } else {
      ++st.negated_skips[w.negated_skip];
    }
  }
  st.original = result.original.size();
  st.negated = result.negated.size();

  if (!config.emit_composed || st.source_captions == 0) return result;

  // Matched videos are mined over the source split's captions.
  std::vector<CaptionRecord> source;
  for (std::size_t i = 0; i < captions.size(); ++i) {
    if (work[i].is_source) source.push_back(captions[i]);
  }
  const auto index = CaptionIndex::build(source, morph);

  // Distinct VPs per subject, in first-seen order.
  std::map<std::string, std::vector<std::string>> pool;
  for (const auto& w : work) {
    for (const auto& item : w.vps) {
      auto& vps = pool[item.subject];
      if (std::find(vps.begin(), vps.end(), item.vp) == vps.end()) vps.push_back(item.vp);
    }
  }

  struct Candidate {
    std::optional<Query> query;
    std::string skip;
  };
  std::vector<std::vector<Candidate>> candidates(captions.size());
  parallel_for(captions.size(), [&](std::size_t i) {
    const auto& w = work[i];
    if (w.vps.empty()) return;
    const std::uint64_t seed = derive_seed(config.seed, "composed", captions[i].caption_id);
    Rng rng(seed);
    for (std::size_t k = 0; k < w.vps.size(); ++k) {
      const auto& item = w.vps[k];
      Candidate c;
      std::vector<const std::string*> others;
      for (const auto& vp : pool.at(item.subject)) {
        if (vp != item.vp) others.push_back(&vp);
      }
      if (others.empty()) {
        c.skip = "NoAlternativeVP";
        candidates[i].push_back(std::move(c));
        continue;
      }
      const std::string& neg = *others[rng.uniform_below(others.size())];
      if (index.content_lemmas(neg).empty() || index.content_lemmas(item.vp).empty()) {
        c.skip = "NoContentWords";
        candidates[i].push_back(std::move(c));
        continue;
      }
      try {
        auto m = find_matched_videos(item.vp, neg, index);
        ComposedTriplet t{item.subject, item.vp, neg,
                          pronoun_for_subject(item.subject, morph)};
        auto composed = compose_query(t, rng, config.include_prose_template, morph);
        Query q;
        q.qid = captions[i].caption_id + "#comp" + std::to_string(k);
        q.kind = QueryKind::kComposed;
        q.text = composed.text;
        q.relevant_ids = std::move(m.relevant);
        std::set_intersection(m.positives.begin(), m.positives.end(),
                              m.negatives.begin(), m.negatives.end(),
                              std::inserter(q.known_negative_ids,
                                            q.known_negative_ids.end()));
        q.pos_subquery = composed.pos_subquery;
        q.neg_subquery = composed.neg_subquery;
        q.seed_trace = seed;
        q.triplet = Triplet{item.subject, item.vp, neg};
        c.query = std::move(q);
      } catch (const Error& e) {
        c.skip = std::string(errc_name(e.code()));
      }
      candidates[i].push_back(std::move(c));
    }
  });

  std::unordered_set<std::string> seen;
  for (auto& per_caption : candidates) {
    for (auto& c : per_caption) {
      ++st.composed_candidates;
      if (!c.query) {
        ++st.composed_skips[c.skip];
        continue;
      }
      ++st.composed_before_dedup;
      const auto& t = *c.query->triplet;
      if (!seen.insert(t.subject + '\t' + t.pos_vp + '\t' + t.neg_vp).second) {
        ++st.composed_skips["Duplicate"];
        continue;
      }
      result.composed.push_back(std::move(*c.query));
    }
  }
  st.composed = result.composed.size();
  return result;
}

std::vector<std::filesystem::path> write_bundle(const RepurposeResult& result,
                                                const RepurposeConfig& config,
                                                const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& body) {
    write_file(dir / name, body);
    written.push_back(dir / name);
  };
  put("original.jsonl", queries_to_jsonl(result.original));
  put("negated.jsonl", queries_to_jsonl(result.negated));
  put("composed.jsonl", queries_to_jsonl(result.composed));
  put("stats.json", result.stats.to_json(config.seed).dump(2) + "\n");
  return written;
}

std::vector<std::string> audit_composed(std::span<const Query> composed,
                                        const CaptionIndex& index) {
  std::vector<std::string> bad;
  for (const auto& q : composed) {
    bool ok = q.kind == QueryKind::kComposed && q.triplet.has_value() &&
              !q.relevant_ids.empty();
    if (ok) {
      const auto pos = index.content_lemmas(q.triplet->pos_vp);
      const auto neg = index.content_lemmas(q.triplet->neg_vp);
      std::set<std::string> expected;
      // Brute force over captions rather than through the postings.
      std::map<std::string, bool> pos_hit, neg_hit;
      for (std::size_t c = 0; c < index.caption_count(); ++c) {
        const auto& lemmas = index.caption_lemmas(c);
        const auto& vid = index.caption(c).video_id;
        if (!pos.empty() && std::search(lemmas.begin(), lemmas.end(), pos.begin(),
                                        pos.end()) != lemmas.end()) {
          pos_hit[vid] = true;
        }
        for (const auto& l : lemmas) {
          if (std::find(neg.begin(), neg.end(), l) != neg.end()) neg_hit[vid] = true;
        }
      }
      for (const auto& [vid, hit] : pos_hit) {
        if (hit && !neg_hit.count(vid)) expected.insert(vid);
      }
      ok = expected == q.relevant_ids;
    }
    if (!ok) bad.push_back(q.qid);
  }
  return bad;
}

}  // namespace negbench::query
