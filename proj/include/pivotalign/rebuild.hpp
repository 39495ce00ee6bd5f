#ifndef PIVOTALIGN_REBUILD_HPP
#define PIVOTALIGN_REBUILD_HPP

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pivotalign/pivot.hpp"

namespace pivotalign::rebuild {

// Which text stream of a triple a strategy looks at.
enum class Stream { Pivot, A, B };

const std::string& stream_name(Stream s);

struct RebuildStrategy {
  enum class Kind { None, StrongPunctSide, PivotPunct };
  Kind kind = Kind::None;
  Stream side = Stream::B;  // only meaningful for StrongPunctSide

  static RebuildStrategy none() { return {Kind::None, Stream::B}; }
  static RebuildStrategy strong_punct(Stream side) {
    return {Kind::StrongPunctSide, side};
  }
  static RebuildStrategy pivot_punct() { return {Kind::PivotPunct, Stream::Pivot}; }

  // Directory-safe label: "none", "strong-punct.a", "pivot".
  std::string label() const;
};

// Sentence-terminal code points (`strong`) and trailing closers stripped
// before the terminal check (`closers`).
struct PunctProfile {
  std::set<char32_t> strong;
  std::set<char32_t> closers;

  static PunctProfile defaults();
  // JSON object with "strong" and "closers" arrays; entries are either
  // single-character strings or integer code points.
  static PunctProfile from_json(std::string_view json_text);
};

// True iff the text, after stripping trailing whitespace and closers, ends
// in a strong terminal.
bool is_strong_terminal(std::string_view text, const PunctProfile& punct);

struct SentenceUnit {
  std::string pivot_text;
  std::string a_text;
  std::string b_text;
  std::vector<int> source_triple_ids;  // consecutive indices into the input
  bool divergent = false;              // any source triple flagged

  bool operator==(const SentenceUnit&) const = default;
};

// Regenerates sentences from one talk's synchronized triples. None emits one
// unit per triple; the punctuation strategies concatenate consecutive
// triples until the designated side ends in a strong terminal. A trailing
// unterminated group still becomes a sentence.
std::vector<SentenceUnit> rebuild(std::span<const pivot::AlignedTriple> triples,
                                  const RebuildStrategy& strategy,
                                  const PunctProfile& punct);

}  // namespace pivotalign::rebuild

#endif  // PIVOTALIGN_REBUILD_HPP
