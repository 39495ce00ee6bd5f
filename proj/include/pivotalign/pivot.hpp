#ifndef PIVOTALIGN_PIVOT_HPP
#define PIVOTALIGN_PIVOT_HPP

#include <string>
#include <vector>

#include "pivotalign/aligner.hpp"
#include "pivotalign/ingest.hpp"

namespace pivotalign::pivot {

// One synchronized (pivot, A, B) text unit. Caption ids index into the
// original talks; pivot ids refer to the pivot stream paired with A.
struct AlignedTriple {
  std::string pivot_text;
  std::string a_text;
  std::string b_text;
  std::vector<int> pivot_caption_ids;
  std::vector<int> a_caption_ids;
  std::vector<int> b_caption_ids;
  bool divergent = false;  // pivot sides of the unit differ textually

  bool operator==(const AlignedTriple&) const = default;
};

// Step-2 self-alignment error measurement.
struct DivergenceReport {
  long total_units = 0;
  long differing_units = 0;
  long total_words = 0;
  long differing_words = 0;
  double unit_rate = 0.0;
  double word_rate = 0.0;
};

// Renders a rate the way the divergence numbers are reported, e.g. "0.4%".
std::string render_percent(double rate);

struct PivotAlignResult {
  std::vector<AlignedTriple> triples;
  DivergenceReport report;
  aligner::AlignmentMap map_pa;  // pivot_a -> a
  aligner::AlignmentMap map_pb;  // pivot_b -> b
  aligner::AlignmentMap map_pp;  // pivot_a -> pivot_b (lexical pass on)
};

// Swaps the source and target sides of every bead.
aligner::AlignmentMap invert(const aligner::AlignmentMap& map);

// Per-unit textual comparison of the two pivot sides of map_pp. A unit
// differs when the whitespace-normalized concatenations differ; words are
// whitespace tokens of the pivot_a side.
DivergenceReport measure_divergence(const aligner::AlignmentMap& map_pp,
                                    const ingest::Talk& pivot_a,
                                    const ingest::Talk& pivot_b);

// Fig.-2 procedure: align pivot_a->a and pivot_b->b (step 1), align the two
// pivot sides to each other with the lexical pass forced on (step 2), then
// compose the chain a <- pivot_a <- pivot_b <- b into synchronized triples
// (step 3). Units whose pivot sides disagree are kept and flagged.
PivotAlignResult pivot_align(const ingest::Talk& pivot_a, const ingest::Talk& a,
                             const ingest::Talk& pivot_b, const ingest::Talk& b,
                             const aligner::AlignerParams& params);

}  // namespace pivotalign::pivot

#endif  // PIVOTALIGN_PIVOT_HPP
