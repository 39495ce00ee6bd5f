#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "pivotalign/errors.hpp"
#include "pivotalign/rebuild.hpp"
#include "pivotalign/unicode.hpp"

using namespace pivotalign;
using namespace pivotalign::rebuild;
using pivotalign::pivot::AlignedTriple;

namespace {

AlignedTriple triple(const std::string& pivot_text, const std::string& a_text,
                     const std::string& b_text, bool divergent = false) {
  AlignedTriple t;
  t.pivot_text = pivot_text;
  t.a_text = a_text;
  t.b_text = b_text;
  t.divergent = divergent;
  return t;
}

// The talk-1443 opening: English pivot with full sentence punctuation, a
// Hebrew-role b side that carries none of it, and a placeholder a side.
std::vector<AlignedTriple> talk1443() {
  std::vector<std::string> en = {
      "I'd like to invite you to close your eyes.",
      "Imagine yourself standing",
      "outside the front door of your home.",
      "I'd like you to notice the color of the door,",
      "the material that it's made out of."};
  std::vector<AlignedTriple> out;
  for (std::size_t i = 0; i < en.size(); ++i)
    out.push_back(triple(en[i], "ar" + std::to_string(i) + " text",
                         "he" + std::to_string(i) + " text"));
  return out;
}

std::vector<std::string> ws_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

TEST_CASE("strategy labels and stream names") {
  CHECK(stream_name(Stream::Pivot) == "pivot");
  CHECK(stream_name(Stream::A) == "a");
  CHECK(stream_name(Stream::B) == "b");
  CHECK(RebuildStrategy::none().label() == "none");
  CHECK(RebuildStrategy::strong_punct(Stream::A).label() == "strong-punct.a");
  CHECK(RebuildStrategy::strong_punct(Stream::B).label() == "strong-punct.b");
  CHECK(RebuildStrategy::pivot_punct().label() == "pivot");
}

TEST_CASE("punct profile defaults") {
  PunctProfile p = PunctProfile::defaults();
  CHECK(p.strong.count(U'.'));
  CHECK(p.strong.count(U'!'));
  CHECK(p.strong.count(U'?'));
  CHECK(p.strong.count(0x2026));  // ellipsis
  CHECK(p.strong.count(0x061F));  // Arabic question mark
  CHECK(p.strong.count(0x06D4));  // Arabic full stop
  CHECK_FALSE(p.strong.count(U';'));
  CHECK(p.closers.count(U'"'));
  CHECK(p.closers.count(0x201D));
  CHECK(p.closers.count(U')'));
}

TEST_CASE("punct profile from json") {
  PunctProfile p = PunctProfile::from_json(
      R"({"strong": [".", "!", 1567], "closers": ["\""]})");
  CHECK(p.strong == std::set<char32_t>{U'.', U'!', 0x061F});
  CHECK(p.closers == std::set<char32_t>{U'"'});

  CHECK_THROWS_AS(PunctProfile::from_json("not json"), ParseError);
  CHECK_THROWS_AS(PunctProfile::from_json(R"({"strong": []})"), ValidationError);
  CHECK_THROWS_AS(PunctProfile::from_json(R"({"strong": ["ab"], "closers": []})"),
                  ValidationError);
  CHECK_THROWS_AS(
      PunctProfile::from_json(R"({"strong": [null], "closers": []})"),
      ValidationError);
}

TEST_CASE("is_strong_terminal") {
  PunctProfile p = PunctProfile::defaults();
  CHECK(is_strong_terminal("the material that it's made out of.", p));
  CHECK_FALSE(is_strong_terminal("I'd like you to notice the color of the door,", p));
  CHECK_FALSE(is_strong_terminal("Imagine yourself standing", p));
  CHECK(is_strong_terminal("He said \"stop.\"", p));
  CHECK(is_strong_terminal("done.  ", p));
  CHECK(is_strong_terminal("really?!", p));
  CHECK(is_strong_terminal("wait…", p));
  CHECK_FALSE(is_strong_terminal("", p));
  CHECK_FALSE(is_strong_terminal("\"", p));
  CHECK_FALSE(is_strong_terminal("no terminal)", p));
  // Arabic question mark terminates; Arabic comma does not.
  CHECK(is_strong_terminal(unicode::encode_utf8({0x0645, 0x0627, 0x061F}), p));
  CHECK_FALSE(is_strong_terminal(unicode::encode_utf8({0x0645, 0x060C}), p));
}

TEST_CASE("rebuild: strategy none is the identity") {
  auto triples = talk1443();
  triples[2].divergent = true;
  auto units = rebuild::rebuild(triples, RebuildStrategy::none(), PunctProfile::defaults());
  REQUIRE(units.size() == triples.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    CHECK(units[i].pivot_text == triples[i].pivot_text);
    CHECK(units[i].a_text == triples[i].a_text);
    CHECK(units[i].b_text == triples[i].b_text);
    CHECK(units[i].source_triple_ids == std::vector<int>{int(i)});
    CHECK(units[i].divergent == triples[i].divergent);
  }
}

TEST_CASE("rebuild: talk-1443 under the three strategies") {
  auto triples = talk1443();
  PunctProfile punct = PunctProfile::defaults();

  SUBCASE("pivot punctuation reconstructs the three sentences") {
    auto units = rebuild::rebuild(triples, RebuildStrategy::pivot_punct(), punct);
    REQUIRE(units.size() == 3);
    CHECK(units[0].pivot_text == "I'd like to invite you to close your eyes.");
    CHECK(units[1].pivot_text ==
          "Imagine yourself standing outside the front door of your home.");
    CHECK(units[2].pivot_text ==
          "I'd like you to notice the color of the door, the material that "
          "it's made out of.");
    CHECK(units[0].source_triple_ids == std::vector<int>{0});
    CHECK(units[1].source_triple_ids == std::vector<int>{1, 2});
    CHECK(units[2].source_triple_ids == std::vector<int>{3, 4});
  }

  SUBCASE("strong punctuation on the unpunctuated side merges everything") {
    auto units = rebuild::rebuild(triples, RebuildStrategy::strong_punct(Stream::B), punct);
    REQUIRE(units.size() == 1);
    CHECK(units[0].source_triple_ids == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(units[0].pivot_text ==
          "I'd like to invite you to close your eyes. Imagine yourself "
          "standing outside the front door of your home. I'd like you to "
          "notice the color of the door, the material that it's made out of.");
  }

  SUBCASE("none keeps the five original units") {
    auto units = rebuild::rebuild(triples, RebuildStrategy::none(), punct);
    CHECK(units.size() == 5);
  }
}

TEST_CASE("rebuild: trailing unterminated group becomes a sentence") {
  std::vector<AlignedTriple> triples = {triple("Done here.", "a0", "b0"),
                                        triple("but this trails off", "a1", "b1")};
  auto units =
      rebuild::rebuild(triples, RebuildStrategy::pivot_punct(), PunctProfile::defaults());
  REQUIRE(units.size() == 2);
  CHECK(units[1].pivot_text == "but this trails off");
  CHECK(units[1].source_triple_ids == std::vector<int>{1});
}

TEST_CASE("rebuild: divergent flag propagates to the merged unit") {
  std::vector<AlignedTriple> triples = {
      triple("no stop here", "a0", "b0"),
      triple("still going", "a1", "b1", true),
      triple("the end.", "a2", "b2")};
  auto units =
      rebuild::rebuild(triples, RebuildStrategy::pivot_punct(), PunctProfile::defaults());
  REQUIRE(units.size() == 1);
  CHECK(units[0].divergent);
}

TEST_CASE("rebuild: token conservation and order on random talks") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> ntriples(1, 30);
  std::uniform_int_distribution<int> punct_die(0, 3);
  PunctProfile punct = PunctProfile::defaults();
  const char* tails[] = {"", ".", "?", ","};

  for (int iter = 0; iter < 100; ++iter) {
    std::vector<AlignedTriple> triples;
    int n = ntriples(rng);
    for (int i = 0; i < n; ++i)
      triples.push_back(triple(testutil::random_text(rng) + tails[punct_die(rng)],
                               testutil::random_text(rng) + tails[punct_die(rng)],
                               testutil::random_text(rng) + tails[punct_die(rng)]));

    for (const RebuildStrategy& strategy :
         {RebuildStrategy::none(), RebuildStrategy::pivot_punct(),
          RebuildStrategy::strong_punct(Stream::A),
          RebuildStrategy::strong_punct(Stream::B)}) {
      auto units = rebuild::rebuild(triples, strategy, punct);
      CHECK(units.size() >= 1);
      CHECK(units.size() <= triples.size());

      // Concatenating unit texts reproduces the concatenated triple texts.
      std::string unit_cat, triple_cat;
      int next_id = 0;
      for (const SentenceUnit& u : units) {
        REQUIRE(!u.source_triple_ids.empty());
        for (int id : u.source_triple_ids) CHECK(id == next_id++);
        if (!unit_cat.empty()) unit_cat.push_back(' ');
        unit_cat += u.pivot_text;
      }
      CHECK(next_id == n);
      for (const AlignedTriple& t : triples) {
        if (!triple_cat.empty()) triple_cat.push_back(' ');
        triple_cat += t.pivot_text;
      }
      CHECK(ws_tokens(unit_cat) == ws_tokens(triple_cat));
    }
  }
}
