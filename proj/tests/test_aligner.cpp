#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "pivotalign/aligner.hpp"
#include "pivotalign/errors.hpp"

using namespace pivotalign;
using namespace pivotalign::aligner;
using doctest::Approx;

namespace {

std::vector<std::string> segments_from_lengths(const std::vector<long>& lens) {
  std::vector<std::string> out;
  for (long l : lens) out.push_back(testutil::segment_of_length(l));
  return out;
}

// Random monotone map over the DP bead inventory, for compose/invert tests.
// `allow_empty` admits the null beads (1,0)/(0,1).
AlignmentMap random_map(std::mt19937& rng, int src_len, int* out_tgt_len,
                        bool allow_empty = true) {
  static const BeadType kTypes[] = {{1, 1}, {1, 0}, {0, 1}, {2, 1}, {1, 2}, {2, 2}};
  std::uniform_int_distribution<int> pick(0, 5);
  AlignmentMap map;
  int i = 0, j = 0;
  while (i < src_len) {
    BeadType t = kTypes[pick(rng)];
    if (!allow_empty && (t.m == 0 || t.n == 0)) continue;
    if (i + t.m > src_len) continue;
    map.beads.push_back({i, i + t.m, j, j + t.n, 0.0});
    i += t.m;
    j += t.n;
  }
  map.src_len = src_len;
  map.tgt_len = j;
  *out_tgt_len = j;
  map.validate();
  return map;
}

}  // namespace

TEST_CASE("length_cost: delta term vanishes at equal lengths") {
  AlignerParams params;
  double cost = length_cost(100, 100, {1, 1}, params);
  // erfc(0) == 1, so only the prior term remains.
  CHECK(cost == Approx(-std::log(0.89)).epsilon(1e-12));
}

TEST_CASE("length_cost: monotone in |delta|") {
  AlignerParams params;
  CHECK(length_cost(100, 100, {1, 1}, params) <
        length_cost(100, 180, {1, 1}, params));
  CHECK(length_cost(100, 180, {1, 1}, params) <
        length_cost(100, 400, {1, 1}, params));
}

TEST_CASE("length_cost: (50,120,(1,2)) matches scalar reimplementation") {
  AlignerParams params;
  CHECK(length_cost(50, 120, {1, 2}, params) ==
        Approx(testutil::oracle_bead_cost(50, 120, {1, 2}, params)).epsilon(1e-12));
}

TEST_CASE("length_cost: both lengths zero is a contract violation") {
  AlignerParams params;
  CHECK_THROWS_AS(length_cost(0, 0, {1, 1}, params), ValidationError);
}

TEST_CASE("length_cost: tail floor keeps extreme deltas finite") {
  AlignerParams params;
  double c = length_cost(1, 100000, {1, 1}, params);
  CHECK(std::isfinite(c));
}

TEST_CASE("align: identical lists give all (1,1) beads") {
  AlignerParams params;
  std::vector<std::string> segs = {"one two", "three", "four five six", "seven"};
  AlignmentMap map = align(segs, segs, params);
  REQUIRE(map.beads.size() == segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(map.beads[i].type() == BeadType{1, 1});
    CHECK(map.beads[i].src_begin == int(i));
    CHECK(map.beads[i].tgt_begin == int(i));
  }
}

TEST_CASE("align: one caption split into two on the other side gives (1,2)") {
  AlignerParams params;
  std::vector<std::string> src = {
      "French sign language was brought to America during the early 1800s,"};
  std::vector<std::string> tgt = {"French sign language was brought to America",
                                  "during the early 1800s,"};
  AlignmentMap map = align(src, tgt, params);
  REQUIRE(map.beads.size() == 1);
  CHECK(map.beads[0].type() == BeadType{1, 2});
}

TEST_CASE("align: empty segment rejected") {
  AlignerParams params;
  std::vector<std::string> src = {"a", ""};
  std::vector<std::string> tgt = {"a b"};
  CHECK_THROWS_AS(align(src, tgt, params), ValidationError);
  CHECK_THROWS_AS(align({}, tgt, params), ValidationError);
}

TEST_CASE("align: matches the exhaustive oracle on random instances") {
  AlignerParams params;
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> nseg(1, 8);
  std::uniform_int_distribution<long> len(1, 80);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<long> src_lens(nseg(rng)), tgt_lens(nseg(rng));
    for (long& l : src_lens) l = len(rng);
    for (long& l : tgt_lens) l = len(rng);
    auto src = segments_from_lengths(src_lens);
    auto tgt = segments_from_lengths(tgt_lens);
    AlignmentMap map = align(src, tgt, params);
    map.validate();
    double oracle = testutil::oracle_min_cost(src_lens, tgt_lens, params);
    CHECK(map.total_cost() == Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("align: deterministic") {
  AlignerParams params;
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> len(1, 60);
  std::vector<long> src_lens(7), tgt_lens(6);
  for (long& l : src_lens) l = len(rng);
  for (long& l : tgt_lens) l = len(rng);
  auto src = segments_from_lengths(src_lens);
  auto tgt = segments_from_lengths(tgt_lens);
  CHECK(align(src, tgt, params) == align(src, tgt, params));
}

TEST_CASE("align: transpose symmetry with symmetric priors and c=1") {
  AlignerParams params;  // defaults are (m,n)-symmetric with c=1
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> nseg(1, 7);
  std::uniform_int_distribution<long> len(1, 70);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<long> src_lens(nseg(rng)), tgt_lens(nseg(rng));
    for (long& l : src_lens) l = len(rng);
    for (long& l : tgt_lens) l = len(rng);
    auto src = segments_from_lengths(src_lens);
    auto tgt = segments_from_lengths(tgt_lens);
    AlignmentMap fwd = align(src, tgt, params);
    AlignmentMap bwd = align(tgt, src, params);
    REQUIRE(fwd.beads.size() == bwd.beads.size());
    for (std::size_t k = 0; k < fwd.beads.size(); ++k) {
      CHECK(fwd.beads[k].src_begin == bwd.beads[k].tgt_begin);
      CHECK(fwd.beads[k].src_end == bwd.beads[k].tgt_end);
      CHECK(fwd.beads[k].tgt_begin == bwd.beads[k].src_begin);
      CHECK(fwd.beads[k].tgt_end == bwd.beads[k].src_end);
    }
  }
}

TEST_CASE("lexical_refine: lambda 0 returns the map unchanged") {
  AlignerParams params;
  params.lexical_weight = 0.0;
  std::vector<std::string> src = {"aa bb", "cc dd"};
  std::vector<std::string> tgt = {"aa bb cc dd"};
  AlignmentMap map = align(src, tgt, params);
  CHECK(lexical_refine(map, src, tgt, params) == map);
}

TEST_CASE("lexical_refine: shared tokens keep the diagonal") {
  AlignerParams params;
  params.lexical_weight = 0.5;
  std::vector<std::string> segs = {"alpha beta", "gamma", "delta epsilon"};
  AlignmentMap map = align(segs, segs, params);
  AlignmentMap refined = lexical_refine(map, segs, segs, params);
  REQUIRE(refined.beads.size() == 3);
  for (const Bead& b : refined.beads) CHECK(b.type() == BeadType{1, 1});
}

TEST_CASE("lexical_refine: token overlap overrides misleading lengths") {
  // The second target segment repeats the first source caption's text, but
  // by lengths alone it pairs better with the long second caption. Token
  // overlap attaches it to the right side.
  std::vector<std::string> src = {"aa", "bb bb bb"};
  std::vector<std::string> tgt = {"aa", "aa", "bb bb bb"};
  AlignerParams params;
  AlignmentMap first = align(src, tgt, params);
  REQUIRE(first.beads.size() == 2);
  CHECK(first.beads[0].type() == BeadType{1, 1});
  CHECK(first.beads[1].type() == BeadType{1, 2});  // "aa" glued to the wrong caption

  params.lexical_weight = 0.9;
  AlignmentMap refined = lexical_refine(first, src, tgt, params);
  REQUIRE(refined.beads.size() == 2);
  CHECK(refined.beads[0].type() == BeadType{1, 2});
  CHECK(refined.beads[0].tgt_end == 2);
  CHECK(refined.beads[1].type() == BeadType{1, 1});
}

TEST_CASE("lexical_refine: lambda outside [0,1] rejected") {
  AlignerParams params;
  params.lexical_weight = 1.5;
  std::vector<std::string> segs = {"a b"};
  AlignmentMap map = identity_map(1);
  CHECK_THROWS_AS(lexical_refine(map, segs, segs, params), ValidationError);
}

TEST_CASE("dice coefficient") {
  CHECK(dice_coefficient("a b c", "a b c") == Approx(1.0));
  CHECK(dice_coefficient("a b", "c d") == Approx(0.0));
  CHECK(dice_coefficient("Hello World", "hello world") == Approx(1.0));
  CHECK(dice_coefficient("a b", "b c") == Approx(0.5));
}

TEST_CASE("identity_map") {
  CHECK(identity_map(0).beads.empty());
  AlignmentMap id3 = identity_map(3);
  REQUIRE(id3.beads.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(id3.beads[i].src_begin == i);
    CHECK(id3.beads[i].tgt_begin == i);
  }
  CHECK(compose(identity_map(3), identity_map(3)) == identity_map(3));
  CHECK_THROWS_AS(identity_map(-1), ValidationError);
}

TEST_CASE("compose: identity laws") {
  std::mt19937 rng(21);
  for (int iter = 0; iter < 30; ++iter) {
    int tgt_len = 0;
    AlignmentMap m = random_map(rng, 6, &tgt_len);
    CHECK(compose(identity_map(6), m) == m);
    CHECK(compose(m, identity_map(tgt_len)) == m);
  }
}

TEST_CASE("compose: chained splits merge into one component") {
  AlignmentMap ab;
  ab.src_len = 1;
  ab.tgt_len = 2;
  ab.beads.push_back({0, 1, 0, 2, 0.0});
  AlignmentMap bc = identity_map(2);
  AlignmentMap out = compose(ab, bc);
  REQUIRE(out.beads.size() == 1);
  CHECK(out.beads[0].src_begin == 0);
  CHECK(out.beads[0].src_end == 1);
  CHECK(out.beads[0].tgt_begin == 0);
  CHECK(out.beads[0].tgt_end == 2);
}

TEST_CASE("compose: offset boundaries coarsen both sides") {
  // A: 2 segments, B: 3, C: 2 with crossing-free but incompatible cuts.
  AlignmentMap ab;
  ab.src_len = 2;
  ab.tgt_len = 3;
  ab.beads.push_back({0, 1, 0, 2, 0.0});  // a0 <-> b0,b1
  ab.beads.push_back({1, 2, 2, 3, 0.0});  // a1 <-> b2
  AlignmentMap bc;
  bc.src_len = 3;
  bc.tgt_len = 2;
  bc.beads.push_back({0, 1, 0, 1, 0.0});  // b0 <-> c0
  bc.beads.push_back({1, 3, 1, 2, 0.0});  // b1,b2 <-> c1
  AlignmentMap out = compose(ab, bc);
  // Only cut compatible on both sides is the trivial one.
  REQUIRE(out.beads.size() == 1);
  CHECK(out.beads[0].src_end == 2);
  CHECK(out.beads[0].tgt_end == 2);
}

TEST_CASE("compose: associative on random chains without null beads") {
  // With (1,0)/(0,1) beads present, a middle segment mapped to nothing can
  // end up sandwiched inside a component; the interval representation must
  // then absorb it, and that lossy step makes the bracketing observable. On
  // null-free chains compose is exact relation composition, so the law holds.
  std::mt19937 rng(31);
  for (int iter = 0; iter < 200; ++iter) {
    int len_b = 0, len_c = 0, len_d = 0;
    AlignmentMap ab = random_map(rng, 5, &len_b, false);
    AlignmentMap bc = random_map(rng, len_b, &len_c, false);
    AlignmentMap cd = random_map(rng, len_c, &len_d, false);
    AlignmentMap left = compose(compose(ab, bc), cd);
    AlignmentMap right = compose(ab, compose(bc, cd));
    CHECK(left == right);
  }
}

TEST_CASE("compose: length mismatch rejected") {
  CHECK_THROWS_AS(compose(identity_map(2), identity_map(3)), ValidationError);
}

TEST_CASE("alignment map serialization round-trip") {
  std::mt19937 rng(41);
  int tgt_len = 0;
  AlignmentMap m = random_map(rng, 8, &tgt_len);
  for (std::size_t i = 0; i < m.beads.size(); ++i) m.beads[i].cost = 0.25 * double(i);
  AlignmentMap back = parse_alignment_map(serialize(m));
  CHECK(back == m);
  CHECK(back.total_cost() == Approx(m.total_cost()));
  CHECK(serialize(m).rfind("#src_len=8", 0) == 0);
}

TEST_CASE("params validation") {
  AlignerParams params;
  params.length_ratio_var = 0.0;
  CHECK_THROWS_AS(params.validate(), ValidationError);
  params = AlignerParams{};
  params.bead_priors[{1, 1}] = 2.0;
  CHECK_THROWS_AS(params.validate(), ValidationError);
  params = AlignerParams{};
  params.band_width = 0;
  CHECK_THROWS_AS(params.validate(), ValidationError);
}

TEST_CASE("banded alignment still finds the diagonal") {
  AlignerParams params;
  params.band_width = 2;
  std::vector<std::string> segs;
  for (int i = 0; i < 40; ++i) segs.push_back(testutil::segment_of_length(20 + i % 7));
  AlignmentMap map = align(segs, segs, params);
  REQUIRE(map.beads.size() == segs.size());
  for (const Bead& b : map.beads) CHECK(b.type() == BeadType{1, 1});
}
