#ifndef PIVOTALIGN_PIPELINE_HPP
#define PIVOTALIGN_PIPELINE_HPP

#include <string>
#include <vector>

#include "pivotalign/aligner.hpp"
#include "pivotalign/corpus.hpp"
#include "pivotalign/pivot.hpp"
#include "pivotalign/rebuild.hpp"

namespace pivotalign::pipeline {

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kEmptyResult = 3;

struct PipelineConfig {
  std::string pivot_lang = "en";
  std::string lang_a;
  std::string lang_b;
  // Input paths: a collection XML file per language, or a directory of
  // per-talk files for srt/vtt. The pivot stream may be given twice when it
  // is segmented differently against A and B.
  std::string pivot_a_path;
  std::string pivot_b_path;  // empty -> same as pivot_a_path
  std::string a_path;
  std::string b_path;
  std::string format = "xml";  // xml | srt | vtt
  rebuild::RebuildStrategy strategy = rebuild::RebuildStrategy::pivot_punct();
  std::string punct_path;  // empty -> built-in defaults
  std::string split_path;  // empty -> everything in train
  aligner::AlignerParams params;
  std::string out_dir = "out";
  bool drop_divergent = false;
  int jobs = 1;

  void validate() const;
};

// Parses "none", "strong-punct:<side>" (side: pivot|a|b or a configured
// language code) or "pivot".
rebuild::RebuildStrategy parse_strategy(const std::string& text,
                                        const PipelineConfig& config);

// Triple dump round-trip (TSV: talk_id, pivot_ids, a_ids, b_ids,
// pivot_text, a_text, b_text, divergent_flag).
std::string triples_to_tsv(const std::string& talk_id,
                           const std::vector<pivot::AlignedTriple>& triples);
std::vector<pivot::AlignedTriple> triples_from_tsv(std::string_view text);

// Sentence dump round-trip.
std::string sentences_to_tsv(const std::string& talk_id,
                             const std::vector<rebuild::SentenceUnit>& units);
std::vector<rebuild::SentenceUnit> sentences_from_tsv(std::string_view text);

// Subcommands. Each reads/writes on-disk intermediates under out_dir and
// returns an exit code. Talks failing a stage are skipped with a logged
// reason.
int cmd_align(const PipelineConfig& config);
int cmd_rebuild(const PipelineConfig& config);
int cmd_stats(const PipelineConfig& config);
int cmd_partition(const PipelineConfig& config);
int cmd_pipeline(const PipelineConfig& config);

}  // namespace pivotalign::pipeline

#endif  // PIVOTALIGN_PIPELINE_HPP
