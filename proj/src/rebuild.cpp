#include "pivotalign/rebuild.hpp"

#include <nlohmann/json.hpp>

#include "pivotalign/errors.hpp"
#include "pivotalign/unicode.hpp"

namespace pivotalign::rebuild {

namespace {

const std::string& triple_text(const pivot::AlignedTriple& t, Stream s) {
  switch (s) {
    case Stream::Pivot: return t.pivot_text;
    case Stream::A: return t.a_text;
    case Stream::B: return t.b_text;
  }
  throw ValidationError("unknown stream");
}

void append_with_space(std::string& acc, const std::string& text) {
  if (text.empty()) return;
  if (!acc.empty()) acc.push_back(' ');
  acc += text;
}

std::set<char32_t> codepoints_from_json(const nlohmann::json& arr,
                                        const char* field) {
  std::set<char32_t> out;
  for (const auto& entry : arr) {
    if (entry.is_number_integer()) {
      out.insert(static_cast<char32_t>(entry.get<long>()));
    } else if (entry.is_string()) {
      auto cps = unicode::decode_utf8(entry.get<std::string>());
      if (cps.size() != 1)
        throw ValidationError(std::string("punct profile field '") + field +
                              "' entries must be single characters");
      out.insert(cps[0]);
    } else {
      throw ValidationError(std::string("punct profile field '") + field +
                            "' entries must be strings or code points");
    }
  }
  return out;
}

}  // namespace

const std::string& stream_name(Stream s) {
  static const std::string names[] = {"pivot", "a", "b"};
  return names[static_cast<int>(s)];
}

std::string RebuildStrategy::label() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::StrongPunctSide: return "strong-punct." + stream_name(side);
    case Kind::PivotPunct: return "pivot";
  }
  throw ValidationError("unknown rebuild strategy");
}

PunctProfile PunctProfile::defaults() {
  PunctProfile p;
  p.strong = {U'.', U'!', U'?',
              0x2026,   // ellipsis
              0x061F,   // Arabic question mark
              0x06D4};  // Arabic full stop
  p.closers = {U'"', U'\'', 0x201D, 0x2019, U')', U']', 0x00BB};
  return p;
}

PunctProfile PunctProfile::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("punct profile: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("strong") || !doc.contains("closers"))
    throw ValidationError("punct profile must have 'strong' and 'closers' arrays");
  PunctProfile p;
  p.strong = codepoints_from_json(doc["strong"], "strong");
  p.closers = codepoints_from_json(doc["closers"], "closers");
  return p;
}

bool is_strong_terminal(std::string_view text, const PunctProfile& punct) {
  auto cps = unicode::decode_utf8(text);
  std::size_t end = cps.size();
  while (end > 0) {
    char32_t cp = cps[end - 1];
    bool ws = cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r';
    if (ws || punct.closers.count(cp)) {
      --end;
      continue;
    }
    break;
  }
  return end > 0 && punct.strong.count(cps[end - 1]) > 0;
}

std::vector<SentenceUnit> rebuild(std::span<const pivot::AlignedTriple> triples,
                                  const RebuildStrategy& strategy,
                                  const PunctProfile& punct) {
  std::vector<SentenceUnit> out;
  if (strategy.kind == RebuildStrategy::Kind::None) {
    out.reserve(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
      SentenceUnit u;
      u.pivot_text = triples[i].pivot_text;
      u.a_text = triples[i].a_text;
      u.b_text = triples[i].b_text;
      u.source_triple_ids = {static_cast<int>(i)};
      u.divergent = triples[i].divergent;
      out.push_back(std::move(u));
    }
    return out;
  }

  const Stream side = strategy.kind == RebuildStrategy::Kind::PivotPunct
                          ? Stream::Pivot
                          : strategy.side;
  SentenceUnit acc;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const pivot::AlignedTriple& t = triples[i];
    append_with_space(acc.pivot_text, t.pivot_text);
    append_with_space(acc.a_text, t.a_text);
    append_with_space(acc.b_text, t.b_text);
    acc.source_triple_ids.push_back(static_cast<int>(i));
    acc.divergent = acc.divergent || t.divergent;
    if (is_strong_terminal(triple_text(t, side), punct)) {
      out.push_back(std::move(acc));
      acc = SentenceUnit{};
    }
  }
  // Trailing unterminated group still becomes a sentence.
  if (!acc.source_triple_ids.empty()) out.push_back(std::move(acc));
  return out;
}

}  // namespace pivotalign::rebuild
