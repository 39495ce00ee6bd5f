#ifndef PIVOTALIGN_INGEST_HPP
#define PIVOTALIGN_INGEST_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pivotalign::ingest {

// One timed subtitle fragment of one talk in one language.
struct Caption {
  int index = 0;           // 0-based ordinal within the talk
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;        // trimmed, internal whitespace collapsed

  bool operator==(const Caption&) const = default;
};

// Ordered captions of one talk in one language.
struct Talk {
  std::string talk_id;
  std::string language;    // BCP-47-style code
  std::string title;       // optional, empty when absent
  std::vector<Caption> captions;

  bool operator==(const Talk&) const = default;

  // Caption texts in order, for feeding the aligner.
  std::vector<std::string> texts() const;
};

struct TalkCollection {
  std::string language;
  std::vector<Talk> talks;  // talk_ids unique

  const Talk* find(std::string_view talk_id) const;
};

// Parses the collection XML format (see to_collection_xml for the schema).
// Throws ParseError with line/column on malformed XML, ValidationError on
// invariant violations (duplicate talk_id, bad timestamps).
TalkCollection parse_collection_xml(std::string_view content);

// Parses SubRip. Cue counters are re-based to 0-based consecutive indices;
// multi-line cue text is joined with single spaces. Empty cues are skipped
// and recorded in `warnings` when given.
Talk parse_srt(std::string_view content, std::string talk_id = "",
               std::string language = "",
               std::vector<std::string>* warnings = nullptr);

// Parses WebVTT. Cue settings after the timestamp line are ignored.
Talk parse_vtt(std::string_view content, std::string talk_id = "",
               std::string language = "",
               std::vector<std::string>* warnings = nullptr);

// Sorted talk_ids present in every collection. Requires >= 2 collections.
std::vector<std::string> intersect_collections(
    const std::vector<TalkCollection>& collections);

// Serializers, inverse of the parsers up to the documented normalization.
std::string to_collection_xml(const TalkCollection& collection);
std::string to_srt(const Talk& talk);
std::string to_vtt(const Talk& talk);

}  // namespace pivotalign::ingest

#endif  // PIVOTALIGN_INGEST_HPP
