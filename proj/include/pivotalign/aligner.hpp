#ifndef PIVOTALIGN_ALIGNER_HPP
#define PIVOTALIGN_ALIGNER_HPP

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pivotalign::aligner {

// m-to-n grouping shape of a bead. The DP searches the classic inventory
// {(1,1),(1,0),(0,1),(2,1),(1,2),(2,2)}; composed maps may carry larger
// shapes.
struct BeadType {
  int m = 1;
  int n = 1;
  auto operator<=>(const BeadType&) const = default;
};

// One monotone alignment unit: half-open index ranges into the source and
// target segment sequences.
struct Bead {
  int src_begin = 0;
  int src_end = 0;
  int tgt_begin = 0;
  int tgt_end = 0;
  double cost = 0.0;

  BeadType type() const { return {src_end - src_begin, tgt_end - tgt_begin}; }
  bool operator==(const Bead& o) const {
    return src_begin == o.src_begin && src_end == o.src_end &&
           tgt_begin == o.tgt_begin && tgt_end == o.tgt_end;
  }
};

struct AlignmentMap {
  std::vector<Bead> beads;
  int src_len = 0;
  int tgt_len = 0;

  double total_cost() const;
  // Throws ValidationError unless beads are monotone and exactly cover
  // [0, src_len) x [0, tgt_len).
  void validate() const;
  bool operator==(const AlignmentMap& o) const {
    return src_len == o.src_len && tgt_len == o.tgt_len && beads == o.beads;
  }
};

struct AlignerParams {
  std::map<BeadType, double> bead_priors = default_priors();
  double length_ratio_mean = 1.0;  // c
  double length_ratio_var = 6.8;   // s^2
  bool lexical_pass = false;
  double lexical_weight = 0.5;     // lambda
  std::optional<int> band_width;

  static std::map<BeadType, double> default_priors();
  void validate() const;
};

// Gale-Church bead cost: -log prior(type) - log P(|delta|), with delta the
// normalized length difference. Lengths are Unicode scalar counts; empty
// sides use pseudo-length 1. Throws ValidationError when both lengths are 0.
double length_cost(long src_chars, long tgt_chars, BeadType type,
                   const AlignerParams& params);

// Minimum-total-cost monotone bead decomposition. Ties prefer (1,1), then
// the lexicographically smaller (m,n).
AlignmentMap align(std::span<const std::string> src,
                   std::span<const std::string> tgt, const AlignerParams& params);

// Second pass: blends the length cost with a Sorensen-Dice token-overlap
// cost and re-runs the DP inside a band around the first-pass path.
// lambda = 0 returns the input map unchanged.
AlignmentMap lexical_refine(const AlignmentMap& map,
                            std::span<const std::string> src,
                            std::span<const std::string> tgt,
                            const AlignerParams& params);

// Sorensen-Dice coefficient over lowercased whitespace-token sets.
double dice_coefficient(std::string_view a, std::string_view b);

// Coarsest common refinement of two chained maps (ab: A->B, bc: B->C).
AlignmentMap compose(const AlignmentMap& ab, const AlignmentMap& bc);

// Like compose, but also reports each composed bead's half-open interval in
// the middle (B) index space.
struct ComposedBead {
  Bead bead;
  int mid_begin = 0;
  int mid_end = 0;
};
std::vector<ComposedBead> compose_with_mid(const AlignmentMap& ab,
                                           const AlignmentMap& bc);

// k (1,1) beads, i <-> i.
AlignmentMap identity_map(int k);

// One bead per line "srcBegin-srcEnd\ttgtBegin-tgtEnd\tcost" after a
// "#src_len=<n> tgt_len=<m>" header.
std::string serialize(const AlignmentMap& map);
AlignmentMap parse_alignment_map(std::string_view text);

}  // namespace pivotalign::aligner

#endif  // PIVOTALIGN_ALIGNER_HPP
