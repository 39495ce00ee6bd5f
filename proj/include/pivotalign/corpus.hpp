#ifndef PIVOTALIGN_CORPUS_HPP
#define PIVOTALIGN_CORPUS_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pivotalign/rebuild.hpp"

namespace pivotalign::corpus {

// Talk-level train/dev/test arrangement. Talks on the exclusion list are
// removed from train even when they appear in no dev/test set.
struct SplitSpec {
  std::map<std::string, std::vector<std::string>> dev_sets;
  std::map<std::string, std::vector<std::string>> test_sets;
  std::vector<std::string> exclude_from_train;

  // Plain-text format: sections "[dev:<name>]", "[test:<name>]", "[exclude]",
  // one talk_id per line; '#' starts a comment.
  static SplitSpec parse(std::string_view text);
  // Throws ValidationError when a talk_id appears in two different sets.
  void validate() const;
};

// Assigns every available talk to exactly one of train / a named set /
// excluded. Keys are "train", "dev.<name>", "test.<name>".
std::map<std::string, std::vector<std::string>> partition(
    std::span<const std::string> talk_ids, const SplitSpec& spec);

struct LengthStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  long max = 0;
  double per_mille_over_100 = 0.0;  // strict > 100

  bool operator==(const LengthStats&) const = default;
};

struct DiffStats {
  double mean = 0.0;  // signed, first minus second
  double stddev = 0.0;

  bool operator==(const DiffStats&) const = default;
};

LengthStats length_stats(std::span<const long> sentence_token_counts);
DiffStats diff_stats(std::span<const std::pair<long, long>> pairs);

// Writes two line-aligned plain-text files, one sentence per line. When
// drop_divergent is set, flagged units are dropped from both sides equally.
// Returns the number of lines written; verifies equal line counts after the
// write. `sides` picks the two streams to export.
long export_bitext(std::span<const rebuild::SentenceUnit> units,
                   std::pair<rebuild::Stream, rebuild::Stream> sides,
                   const std::string& path_first, const std::string& path_second,
                   bool drop_divergent = false);

// One row of the length-statistics report.
struct StatsRow {
  std::string label;
  LengthStats first;
  LengthStats second;
};

// Human-readable table with columns (mu, sigma, max, permille>100) per side.
std::string render_stats_table(const std::string& first_lang,
                               const std::string& second_lang,
                               std::span<const StatsRow> rows,
                               std::span<const std::pair<std::string, DiffStats>>
                                   diff_rows);

// Same content as TSV.
std::string render_stats_tsv(const std::string& first_lang,
                             const std::string& second_lang,
                             std::span<const StatsRow> rows,
                             std::span<const std::pair<std::string, DiffStats>>
                                 diff_rows);

}  // namespace pivotalign::corpus

#endif  // PIVOTALIGN_CORPUS_HPP
