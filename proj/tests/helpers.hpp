#ifndef PIVOTALIGN_TESTS_HELPERS_HPP
#define PIVOTALIGN_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "pivotalign/ingest.hpp"

namespace testutil {

// Deterministic word soup, already in ingest-normalized form (non-empty,
// single internal spaces, no edge whitespace).
inline std::string random_text(std::mt19937& rng, int min_words = 1,
                               int max_words = 12) {
  static const char* kWords[] = {
      "the",   "quick", "brown",  "fox",    "jumps", "over",  "lazy",
      "dog",   "and",   "then",   "stops",  "near",  "a",     "river",
      "while", "birds", "circle", "slowly", "above", "water", "light"};
  std::uniform_int_distribution<int> nwords(min_words, max_words);
  std::uniform_int_distribution<int> word(0, std::size(kWords) - 1);
  int n = nwords(rng);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += kWords[word(rng)];
  }
  return out;
}

inline pivotalign::ingest::Talk random_talk(std::mt19937& rng,
                                            const std::string& talk_id,
                                            const std::string& language,
                                            int min_captions = 1,
                                            int max_captions = 20) {
  std::uniform_int_distribution<int> ncap(min_captions, max_captions);
  std::uniform_int_distribution<int> gap(0, 500);
  std::uniform_int_distribution<int> dur(500, 6000);
  pivotalign::ingest::Talk talk;
  talk.talk_id = talk_id;
  talk.language = language;
  std::int64_t t = 0;
  int n = ncap(rng);
  for (int i = 0; i < n; ++i) {
    pivotalign::ingest::Caption c;
    c.index = i;
    c.start_ms = t + gap(rng);
    c.end_ms = c.start_ms + dur(rng);
    t = c.end_ms;
    c.text = random_text(rng);
    talk.captions.push_back(std::move(c));
  }
  return talk;
}

}  // namespace testutil

#endif
