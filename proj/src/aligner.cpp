#include "pivotalign/aligner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "pivotalign/errors.hpp"
#include "pivotalign/unicode.hpp"

namespace pivotalign::aligner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailFloor = 1e-12;

// Above this size the DP defaults to a banded search.
constexpr int kBandThreshold = 5000;
constexpr int kDefaultBand = 200;

// DP candidate shapes in tie-break preference order: (1,1) first, then
// lexicographically by (m,n).
std::vector<BeadType> inventory_in_preference_order(const AlignerParams& params) {
  std::vector<BeadType> types;
  for (const auto& [type, prior] : params.bead_priors) types.push_back(type);
  std::sort(types.begin(), types.end(), [](const BeadType& a, const BeadType& b) {
    bool a11 = a.m == 1 && a.n == 1;
    bool b11 = b.m == 1 && b.n == 1;
    if (a11 != b11) return a11;
    return a < b;
  });
  return types;
}

std::set<std::string> token_set_lower(std::string_view text) {
  std::set<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.insert(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      cur.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  return tokens;
}

std::string join_segments(std::span<const std::string> segments, int begin, int end) {
  std::string out;
  for (int i = begin; i < end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += segments[i];
  }
  return out;
}

void check_segments(std::span<const std::string> segments, const char* which) {
  for (const std::string& s : segments)
    if (s.empty())
      throw ValidationError(std::string(which) + " contains an empty segment");
}

// Shared DP over the bead inventory. `bead_cost` scores one candidate bead;
// `min_j`/`max_j` bound the reachable target positions per source position
// (inclusive), empty vectors meaning unbounded.
AlignmentMap run_dp(int src_len, int tgt_len,
                    const std::vector<BeadType>& types,
                    const std::function<double(int, int, BeadType)>& bead_cost,
                    const std::vector<int>& min_j, const std::vector<int>& max_j) {
  const int S = src_len, T = tgt_len;
  auto in_band = [&](int i, int j) {
    if (min_j.empty()) return true;
    return j >= min_j[i] && j <= max_j[i];
  };

  std::vector<double> dp(static_cast<std::size_t>(S + 1) * (T + 1), kInf);
  std::vector<int> back(dp.size(), -1);  // index into `types`
  auto at = [&](int i, int j) -> std::size_t {
    return static_cast<std::size_t>(i) * (T + 1) + j;
  };
  dp[at(0, 0)] = 0.0;

  for (int i = 0; i <= S; ++i) {
    for (int j = 0; j <= T; ++j) {
      if (i == 0 && j == 0) continue;
      if (!in_band(i, j)) continue;
      double best = kInf;
      int best_type = -1;
      for (std::size_t t = 0; t < types.size(); ++t) {
        const BeadType bt = types[t];
        int pi = i - bt.m, pj = j - bt.n;
        if (pi < 0 || pj < 0) continue;
        if (!in_band(pi, pj)) continue;
        double prev = dp[at(pi, pj)];
        if (prev == kInf) continue;
        double total = prev + bead_cost(i, j, bt);
        if (total < best) {
          best = total;
          best_type = static_cast<int>(t);
        }
      }
      dp[at(i, j)] = best;
      back[at(i, j)] = best_type;
    }
  }

  if (dp[at(S, T)] == kInf)
    throw ValidationError("alignment DP found no feasible path");

  AlignmentMap map;
  map.src_len = S;
  map.tgt_len = T;
  int i = S, j = T;
  while (i != 0 || j != 0) {
    const BeadType bt = types[back[at(i, j)]];
    Bead bead;
    bead.src_begin = i - bt.m;
    bead.src_end = i;
    bead.tgt_begin = j - bt.n;
    bead.tgt_end = j;
    bead.cost = bead_cost(i, j, bt);
    map.beads.push_back(bead);
    i -= bt.m;
    j -= bt.n;
  }
  std::reverse(map.beads.begin(), map.beads.end());
  return map;
}

std::vector<long> prefix_scalar_lengths(std::span<const std::string> segments) {
  std::vector<long> prefix(segments.size() + 1, 0);
  for (std::size_t i = 0; i < segments.size(); ++i)
    prefix[i + 1] = prefix[i] + static_cast<long>(unicode::scalar_length(segments[i]));
  return prefix;
}

void default_band(int src_len, int tgt_len, const std::optional<int>& requested,
                  std::vector<int>& min_j, std::vector<int>& max_j) {
  int band;
  if (requested) {
    band = *requested;
  } else if (std::max(src_len, tgt_len) < kBandThreshold) {
    return;  // unbounded
  } else {
    band = kDefaultBand;
  }
  min_j.assign(src_len + 1, 0);
  max_j.assign(src_len + 1, tgt_len);
  for (int i = 0; i <= src_len; ++i) {
    long center = src_len == 0
                      ? 0
                      : (static_cast<long>(i) * tgt_len + src_len / 2) / src_len;
    min_j[i] = static_cast<int>(std::max(0L, center - band));
    max_j[i] = static_cast<int>(std::min<long>(tgt_len, center + band));
  }
  // The corners must stay reachable.
  min_j[0] = 0;
  max_j[src_len] = tgt_len;
}

}  // namespace

std::map<BeadType, double> AlignerParams::default_priors() {
  // Classical published category probabilities (1-1: 0.89, 1-0/0-1: 0.0099,
  // 2-1/1-2: 0.089, 2-2: 0.011) with the symmetric categories split between
  // their two members so the priors form a sub-distribution.
  return {
      {{1, 1}, 0.89},    {{1, 0}, 0.00495}, {{0, 1}, 0.00495},
      {{2, 1}, 0.0445},  {{1, 2}, 0.0445},  {{2, 2}, 0.011},
  };
}

void AlignerParams::validate() const {
  if (bead_priors.empty()) throw ValidationError("bead_priors must be non-empty");
  double sum = 0.0;
  for (const auto& [type, prior] : bead_priors) {
    if (prior <= 0.0)
      throw ValidationError("bead prior must be positive");
    if (type.m < 0 || type.n < 0 || (type.m == 0 && type.n == 0))
      throw ValidationError("bead type (0,0) is not allowed");
    sum += prior;
  }
  if (sum > 1.0 + 1e-9) throw ValidationError("bead priors must sum to <= 1");
  if (length_ratio_var <= 0.0) throw ValidationError("length_ratio_var must be > 0");
  if (lexical_weight < 0.0 || lexical_weight > 1.0)
    throw ValidationError("lexical_weight must lie in [0,1]");
  if (band_width && *band_width < 1)
    throw ValidationError("band_width must be >= 1");
}

double AlignmentMap::total_cost() const {
  double sum = 0.0;
  for (const Bead& b : beads) sum += b.cost;
  return sum;
}

void AlignmentMap::validate() const {
  int spos = 0, tpos = 0;
  for (const Bead& b : beads) {
    if (b.src_begin > b.src_end || b.tgt_begin > b.tgt_end)
      throw ValidationError("bead with inverted span");
    if (b.src_begin == b.src_end && b.tgt_begin == b.tgt_end)
      throw ValidationError("bead with both spans empty");
    if (b.src_begin != spos || b.tgt_begin != tpos)
      throw ValidationError("beads do not tile the index space");
    spos = b.src_end;
    tpos = b.tgt_end;
  }
  if (spos != src_len || tpos != tgt_len)
    throw ValidationError("beads do not cover [0,src_len) x [0,tgt_len)");
}

double length_cost(long src_chars, long tgt_chars, BeadType type,
                   const AlignerParams& params) {
  if (src_chars < 0 || tgt_chars < 0)
    throw ValidationError("negative segment length");
  if (src_chars == 0 && tgt_chars == 0)
    throw ValidationError("length_cost called with both lengths 0");
  auto it = params.bead_priors.find(type);
  if (it == params.bead_priors.end())
    throw ValidationError("bead type (" + std::to_string(type.m) + "," +
                          std::to_string(type.n) + ") has no prior");
  // Empty sides get pseudo-length 1 so delta stays finite.
  double s = src_chars == 0 ? 1.0 : static_cast<double>(src_chars);
  double t = tgt_chars == 0 ? 1.0 : static_cast<double>(tgt_chars);
  double c = params.length_ratio_mean;
  // Symmetrized variance scale: mean of the two lengths, so that swapping
  // the sides at c=1 flips delta's sign only.
  double delta = (t - s * c) / std::sqrt((s + t) / 2.0 * params.length_ratio_var);
  // Two-sided tail 2*(1 - Phi(|delta|)) = erfc(|delta| / sqrt(2)).
  double tail = std::erfc(std::fabs(delta) / std::sqrt(2.0));
  if (tail < kTailFloor) tail = kTailFloor;
  return -std::log(it->second) - std::log(tail);
}

AlignmentMap align(std::span<const std::string> src,
                   std::span<const std::string> tgt, const AlignerParams& params) {
  params.validate();
  if (src.empty() || tgt.empty())
    throw ValidationError("align requires non-empty segment sequences");
  check_segments(src, "source");
  check_segments(tgt, "target");

  const auto types = inventory_in_preference_order(params);
  const auto src_prefix = prefix_scalar_lengths(src);
  const auto tgt_prefix = prefix_scalar_lengths(tgt);

  auto bead_cost = [&](int i, int j, BeadType bt) {
    long s = src_prefix[i] - src_prefix[i - bt.m];
    long t = tgt_prefix[j] - tgt_prefix[j - bt.n];
    return length_cost(s, t, bt, params);
  };

  std::vector<int> min_j, max_j;
  default_band(static_cast<int>(src.size()), static_cast<int>(tgt.size()),
               params.band_width, min_j, max_j);

  AlignmentMap map = run_dp(static_cast<int>(src.size()),
                            static_cast<int>(tgt.size()), types, bead_cost,
                            min_j, max_j);
  map.validate();
  return map;
}

double dice_coefficient(std::string_view a, std::string_view b) {
  auto sa = token_set_lower(a);
  auto sb = token_set_lower(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const std::string& t : sa) common += sb.count(t);
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(sa.size() + sb.size());
}

AlignmentMap lexical_refine(const AlignmentMap& map,
                            std::span<const std::string> src,
                            std::span<const std::string> tgt,
                            const AlignerParams& params) {
  params.validate();
  map.validate();
  if (map.src_len != static_cast<int>(src.size()) ||
      map.tgt_len != static_cast<int>(tgt.size()))
    throw ValidationError("map does not match the given segment sequences");
  const double lambda = params.lexical_weight;
  if (lambda == 0.0) return map;

  // First-pass target position at every source boundary, for the corridor.
  std::vector<int> path(map.src_len + 1, 0);
  for (const Bead& b : map.beads)
    for (int i = b.src_begin; i <= b.src_end; ++i)
      path[i] = std::max(path[i], i == b.src_end ? b.tgt_end : b.tgt_begin);
  path[map.src_len] = map.tgt_len;

  std::vector<int> min_j, max_j;
  if (params.band_width) {
    int band = *params.band_width;
    min_j.resize(map.src_len + 1);
    max_j.resize(map.src_len + 1);
    for (int i = 0; i <= map.src_len; ++i) {
      min_j[i] = std::max(0, path[i] - band);
      max_j[i] = std::min(map.tgt_len, path[i] + band);
    }
    min_j[0] = 0;
    max_j[map.src_len] = map.tgt_len;
  }

  const auto types = inventory_in_preference_order(params);
  const auto src_prefix = prefix_scalar_lengths(src);
  const auto tgt_prefix = prefix_scalar_lengths(tgt);

  auto bead_cost = [&](int i, int j, BeadType bt) {
    long s = src_prefix[i] - src_prefix[i - bt.m];
    long t = tgt_prefix[j] - tgt_prefix[j - bt.n];
    double lc = length_cost(s, t, bt, params);
    double overlap = dice_coefficient(join_segments(src, i - bt.m, i),
                                      join_segments(tgt, j - bt.n, j));
    return (1.0 - lambda) * lc + lambda * (1.0 - overlap);
  };

  AlignmentMap refined =
      run_dp(map.src_len, map.tgt_len, types, bead_cost, min_j, max_j);
  refined.validate();
  return refined;
}

std::vector<ComposedBead> compose_with_mid(const AlignmentMap& ab,
                                           const AlignmentMap& bc) {
  ab.validate();
  bc.validate();
  if (ab.tgt_len != bc.src_len)
    throw ValidationError("compose: ab.tgt_len != bc.src_len");

  const int B = ab.tgt_len;
  if (ab.beads.empty() && bc.beads.empty()) return {};

  // Common cut points of the two partitions of the middle index space.
  std::set<int> cuts_a{0, B}, cuts_b{0, B};
  for (const Bead& b : ab.beads) cuts_a.insert(b.tgt_end);
  for (const Bead& b : bc.beads) cuts_b.insert(b.src_end);
  std::set<int> cut_set;
  std::set_intersection(cuts_a.begin(), cuts_a.end(), cuts_b.begin(), cuts_b.end(),
                        std::inserter(cut_set, cut_set.begin()));
  std::vector<int> cuts(cut_set.begin(), cut_set.end());
  const int nintervals = std::max<int>(0, static_cast<int>(cuts.size()) - 1);

  std::vector<ComposedBead> out;
  std::size_t ia = 0, ib = 0;  // cursors into ab.beads / bc.beads
  int src_pos = 0, tgt_pos = 0;  // running output positions

  // Beads with an empty middle span are linked to nothing across the middle
  // space, so they stay standalone components unless the enclosing
  // component's outer span surrounds them (then they must be absorbed to
  // keep the output spans contiguous).
  auto emit_ab_empty = [&](const Bead& b) {
    ComposedBead cb;
    cb.bead = b;
    cb.bead.tgt_begin = cb.bead.tgt_end = tgt_pos;
    cb.mid_begin = cb.mid_end = b.tgt_begin;
    out.push_back(cb);
    src_pos = b.src_end;
  };
  auto emit_bc_empty = [&](const Bead& b) {
    ComposedBead cb;
    cb.bead.src_begin = cb.bead.src_end = src_pos;
    cb.bead.tgt_begin = b.tgt_begin;
    cb.bead.tgt_end = b.tgt_end;
    cb.bead.cost = b.cost;
    cb.mid_begin = cb.mid_end = b.src_begin;
    out.push_back(cb);
    tgt_pos = b.tgt_end;
  };
  auto emit_empties_at = [&](int cut) {
    while (ia < ab.beads.size() && ab.beads[ia].tgt_begin == ab.beads[ia].tgt_end &&
           ab.beads[ia].tgt_begin == cut)
      emit_ab_empty(ab.beads[ia++]);
    while (ib < bc.beads.size() && bc.beads[ib].src_begin == bc.beads[ib].src_end &&
           bc.beads[ib].src_begin == cut)
      emit_bc_empty(bc.beads[ib++]);
  };

  for (int k = 0; k < nintervals; ++k) {
    emit_empties_at(cuts[k]);
    const int lo = cuts[k], hi = cuts[k + 1];

    // Gather every bead whose middle span lies in [lo, hi), including
    // empty-span beads at strictly interior positions.
    auto gather = [&](const std::vector<Bead>& beads, std::size_t& cursor,
                      auto mid_begin, auto mid_end) {
      std::vector<const Bead*> members;
      while (cursor < beads.size()) {
        const Bead& b = beads[cursor];
        int mb = mid_begin(b), me = mid_end(b);
        bool inside = mb == me ? (mb > lo && mb < hi) : (mb >= lo && me <= hi);
        if (!inside) break;
        members.push_back(&b);
        ++cursor;
      }
      return members;
    };
    auto ab_members = gather(ab.beads, ia, [](const Bead& b) { return b.tgt_begin; },
                             [](const Bead& b) { return b.tgt_end; });
    auto bc_members = gather(bc.beads, ib, [](const Bead& b) { return b.src_begin; },
                             [](const Bead& b) { return b.src_end; });

    // The component's outer span on each side is the hull of the non-empty
    // outer spans of the beads that actually touch the middle interval.
    ComposedBead cb;
    cb.mid_begin = lo;
    cb.mid_end = hi;
    int src_hull_b = -1, src_hull_e = -1, tgt_hull_b = -1, tgt_hull_e = -1;
    for (const Bead* b : ab_members)
      if (b->tgt_begin != b->tgt_end && b->src_begin != b->src_end) {
        if (src_hull_b < 0) src_hull_b = b->src_begin;
        src_hull_e = b->src_end;
      }
    for (const Bead* b : bc_members)
      if (b->src_begin != b->src_end && b->tgt_begin != b->tgt_end) {
        if (tgt_hull_b < 0) tgt_hull_b = b->tgt_begin;
        tgt_hull_e = b->tgt_end;
      }

    // Empty-middle beads inside the hull are absorbed; the others stay
    // standalone, emitted on whichever side of the component they fall.
    std::vector<const Bead*> ab_after, bc_after;
    for (const Bead* b : ab_members) {
      if (b->tgt_begin != b->tgt_end ||
          (src_hull_b >= 0 && b->src_begin >= src_hull_b && b->src_end <= src_hull_e)) {
        cb.bead.cost += b->cost;
      } else if (src_hull_b < 0 || b->src_end <= src_hull_b) {
        emit_ab_empty(*b);
      } else {
        ab_after.push_back(b);
      }
    }
    for (const Bead* b : bc_members) {
      if (b->src_begin != b->src_end ||
          (tgt_hull_b >= 0 && b->tgt_begin >= tgt_hull_b && b->tgt_end <= tgt_hull_e)) {
        cb.bead.cost += b->cost;
      } else if (tgt_hull_b < 0 || b->tgt_end <= tgt_hull_b) {
        emit_bc_empty(*b);
      } else {
        bc_after.push_back(b);
      }
    }

    if (src_hull_b >= 0) {
      cb.bead.src_begin = src_hull_b;
      cb.bead.src_end = src_hull_e;
    } else {
      cb.bead.src_begin = cb.bead.src_end = src_pos;
    }
    if (tgt_hull_b >= 0) {
      cb.bead.tgt_begin = tgt_hull_b;
      cb.bead.tgt_end = tgt_hull_e;
    } else {
      cb.bead.tgt_begin = cb.bead.tgt_end = tgt_pos;
    }
    out.push_back(cb);
    src_pos = cb.bead.src_end;
    tgt_pos = cb.bead.tgt_end;
    for (const Bead* b : ab_after) emit_ab_empty(*b);
    for (const Bead* b : bc_after) emit_bc_empty(*b);
  }
  emit_empties_at(B);
  return out;
}

AlignmentMap compose(const AlignmentMap& ab, const AlignmentMap& bc) {
  AlignmentMap out;
  out.src_len = ab.src_len;
  out.tgt_len = bc.tgt_len;
  for (const ComposedBead& cb : compose_with_mid(ab, bc)) {
    // Components with content only in the middle space vanish from the
    // composed map.
    if (cb.bead.src_begin == cb.bead.src_end &&
        cb.bead.tgt_begin == cb.bead.tgt_end)
      continue;
    out.beads.push_back(cb.bead);
  }
  out.validate();
  return out;
}

AlignmentMap identity_map(int k) {
  if (k < 0) throw ValidationError("identity_map requires k >= 0");
  AlignmentMap map;
  map.src_len = k;
  map.tgt_len = k;
  map.beads.reserve(k);
  for (int i = 0; i < k; ++i) map.beads.push_back({i, i + 1, i, i + 1, 0.0});
  return map;
}

std::string serialize(const AlignmentMap& map) {
  std::ostringstream out;
  out << "#src_len=" << map.src_len << " tgt_len=" << map.tgt_len << '\n';
  out.precision(17);
  for (const Bead& b : map.beads)
    out << b.src_begin << '-' << b.src_end << '\t' << b.tgt_begin << '-'
        << b.tgt_end << '\t' << b.cost << '\n';
  return out.str();
}

AlignmentMap parse_alignment_map(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("#src_len=", 0) != 0)
    throw ParseError("alignment map missing #src_len header");
  AlignmentMap map;
  if (std::sscanf(line.c_str(), "#src_len=%d tgt_len=%d", &map.src_len,
                  &map.tgt_len) != 2)
    throw ParseError("bad alignment map header: " + line);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Bead b;
    if (std::sscanf(line.c_str(), "%d-%d\t%d-%d\t%lf", &b.src_begin, &b.src_end,
                    &b.tgt_begin, &b.tgt_end, &b.cost) != 5)
      throw ParseError("bad alignment map line", line_no, 1);
    map.beads.push_back(b);
  }
  map.validate();
  return map;
}

}  // namespace pivotalign::aligner
