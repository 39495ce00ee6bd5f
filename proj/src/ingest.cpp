#include "pivotalign/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "pivotalign/errors.hpp"
#include "pivotalign/unicode.hpp"

namespace pivotalign::ingest {

namespace {

// ---------------------------------------------------------------------------
// Shared caption validation
// ---------------------------------------------------------------------------

// Stable-sorts by start time, re-bases indices and enforces the Caption
// invariants. `where` names the talk in error messages.
void finalize_captions(std::vector<Caption>& captions, const std::string& where) {
  std::stable_sort(captions.begin(), captions.end(),
                   [](const Caption& a, const Caption& b) {
                     return a.start_ms < b.start_ms;
                   });
  for (std::size_t i = 0; i < captions.size(); ++i) {
    Caption& c = captions[i];
    c.index = static_cast<int>(i);
    if (c.start_ms < 0 || c.end_ms < c.start_ms)
      throw ValidationError("bad timestamps in talk " + where + ", caption " +
                            std::to_string(i));
    if (i > 0 && c.start_ms < captions[i - 1].end_ms)
      throw ValidationError("overlapping captions in talk " + where +
                            ", caption " + std::to_string(i));
    if (c.text.empty())
      throw ValidationError("empty caption text in talk " + where +
                            ", caption " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Minimal XML reader for the collection schema
// ---------------------------------------------------------------------------

struct XmlCursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  char next() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) next();
  }

  void skip_misc() {
    // Whitespace, comments and processing instructions between elements.
    for (;;) {
      skip_ws();
      if (pos + 3 < text.size() && text.substr(pos, 4) == "<!--") {
        std::size_t end = text.find("-->", pos + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        while (pos < end + 3) next();
      } else if (pos + 1 < text.size() && text.substr(pos, 2) == "<?") {
        std::size_t end = text.find("?>", pos + 2);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        while (pos < end + 2) next();
      } else {
        return;
      }
    }
  }

  void expect(char c) {
    if (eof() || peek() != c)
      fail(std::string("expected '") + c + "'");
    next();
  }
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == ':' || c == '.';
}

std::string read_name(XmlCursor& cur) {
  std::string name;
  while (!cur.eof() && is_name_char(cur.peek())) name.push_back(cur.next());
  if (name.empty()) cur.fail("expected name");
  return name;
}

void decode_entity(XmlCursor& cur, std::string& out) {
  // cur is positioned just after '&'.
  std::string ent;
  while (!cur.eof() && cur.peek() != ';') {
    ent.push_back(cur.next());
    if (ent.size() > 8) cur.fail("unterminated entity");
  }
  if (cur.eof()) cur.fail("unterminated entity");
  cur.next();  // ';'
  if (ent == "amp") out.push_back('&');
  else if (ent == "lt") out.push_back('<');
  else if (ent == "gt") out.push_back('>');
  else if (ent == "quot") out.push_back('"');
  else if (ent == "apos") out.push_back('\'');
  else if (!ent.empty() && ent[0] == '#') {
    int base = 10;
    std::size_t start = 1;
    if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
      base = 16;
      start = 2;
    }
    char32_t cp = 0;
    try {
      cp = static_cast<char32_t>(std::stoul(ent.substr(start), nullptr, base));
    } catch (...) {
      cur.fail("bad character reference &" + ent + ";");
    }
    unicode::append_utf8(out, cp);
  } else {
    cur.fail("unknown entity &" + ent + ";");
  }
}

std::map<std::string, std::string> read_attributes(XmlCursor& cur) {
  std::map<std::string, std::string> attrs;
  for (;;) {
    cur.skip_ws();
    if (cur.eof()) cur.fail("unterminated tag");
    char c = cur.peek();
    if (c == '>' || c == '/') return attrs;
    std::string name = read_name(cur);
    cur.skip_ws();
    cur.expect('=');
    cur.skip_ws();
    if (cur.eof() || (cur.peek() != '"' && cur.peek() != '\''))
      cur.fail("expected quoted attribute value");
    char quote = cur.next();
    std::string value;
    for (;;) {
      if (cur.eof()) cur.fail("unterminated attribute value");
      char v = cur.next();
      if (v == quote) break;
      if (v == '&') decode_entity(cur, value);
      else value.push_back(v);
    }
    if (!attrs.emplace(name, value).second)
      cur.fail("duplicate attribute " + name);
  }
}

// Reads text content up to the next '<', decoding entities.
std::string read_text(XmlCursor& cur) {
  std::string out;
  while (!cur.eof() && cur.peek() != '<') {
    char c = cur.next();
    if (c == '&') decode_entity(cur, out);
    else out.push_back(c);
  }
  return out;
}

void read_close_tag(XmlCursor& cur, const std::string& name) {
  cur.expect('<');
  cur.expect('/');
  std::string got = read_name(cur);
  if (got != name) cur.fail("expected </" + name + ">, got </" + got + ">");
  cur.skip_ws();
  cur.expect('>');
}

std::int64_t parse_ms_attr(XmlCursor& cur, const std::map<std::string, std::string>& attrs,
                           const std::string& key) {
  auto it = attrs.find(key);
  if (it == attrs.end()) cur.fail("caption missing attribute " + key);
  const std::string& v = it->second;
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-';
      }))
    cur.fail("caption attribute " + key + " is not an integer");
  try {
    return std::stoll(v);
  } catch (...) {
    cur.fail("caption attribute " + key + " is not an integer");
  }
}

// ---------------------------------------------------------------------------
// Timestamps
// ---------------------------------------------------------------------------

// Parses "HH:MM:SS<sep>mmm". Returns false on malformed input.
bool parse_clock(std::string_view s, char sep, std::int64_t& out_ms) {
  // Optional hours field for VTT ("MM:SS.mmm" or "HH:MM:SS.mmm").
  std::vector<std::string> fields;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  if (fields.size() < 2 || fields.size() > 3) return false;
  std::string& last = fields.back();
  std::size_t dot = last.find(sep);
  if (dot == std::string::npos) return false;
  std::string secs = last.substr(0, dot);
  std::string ms = last.substr(dot + 1);
  if (ms.size() != 3) return false;
  auto all_digits = [](const std::string& f) {
    return !f.empty() && std::all_of(f.begin(), f.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
  };
  for (std::size_t i = 0; i + 1 < fields.size(); ++i)
    if (!all_digits(fields[i])) return false;
  if (!all_digits(secs) || !all_digits(ms)) return false;
  std::int64_t hours = fields.size() == 3 ? std::stoll(fields[0]) : 0;
  std::int64_t minutes = std::stoll(fields[fields.size() - 2]);
  std::int64_t seconds = std::stoll(secs);
  out_ms = ((hours * 60 + minutes) * 60 + seconds) * 1000 + std::stoll(ms);
  return true;
}

std::string format_clock(std::int64_t ms, char sep) {
  char buf[32];
  std::int64_t h = ms / 3600000;
  std::int64_t m = (ms / 60000) % 60;
  std::int64_t s = (ms / 1000) % 60;
  std::int64_t frac = ms % 1000;
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld%c%03lld",
                static_cast<long long>(h), static_cast<long long>(m),
                static_cast<long long>(s), sep, static_cast<long long>(frac));
  return buf;
}

std::string rstrip_cr(std::string line) {
  while (!line.empty() && (line.back() == '\r')) line.pop_back();
  return line;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void require_utf8(std::string_view content) {
  if (!unicode::is_valid_utf8(content))
    throw ValidationError("input is not valid UTF-8");
}

}  // namespace

std::vector<std::string> Talk::texts() const {
  std::vector<std::string> out;
  out.reserve(captions.size());
  for (const Caption& c : captions) out.push_back(c.text);
  return out;
}

const Talk* TalkCollection::find(std::string_view talk_id) const {
  for (const Talk& t : talks)
    if (t.talk_id == talk_id) return &t;
  return nullptr;
}

TalkCollection parse_collection_xml(std::string_view content) {
  content = unicode::strip_bom(content);
  require_utf8(content);
  XmlCursor cur{content};
  cur.skip_misc();
  cur.expect('<');
  std::string root = read_name(cur);
  if (root != "collection") cur.fail("expected <collection> root, got <" + root + ">");
  auto root_attrs = read_attributes(cur);
  cur.expect('>');

  TalkCollection collection;
  if (auto it = root_attrs.find("language"); it != root_attrs.end())
    collection.language = it->second;

  std::set<std::string> seen_ids;
  for (;;) {
    cur.skip_misc();
    read_text(cur);  // ignore stray whitespace text
    cur.skip_misc();
    if (cur.eof()) cur.fail("unterminated <collection>");
    if (cur.text.substr(cur.pos, 2) == "</") {
      read_close_tag(cur, "collection");
      break;
    }
    cur.expect('<');
    std::string tag = read_name(cur);
    if (tag != "talk") cur.fail("expected <talk>, got <" + tag + ">");
    auto talk_attrs = read_attributes(cur);
    cur.expect('>');

    Talk talk;
    talk.language = collection.language;
    if (auto it = talk_attrs.find("id"); it != talk_attrs.end()) talk.talk_id = it->second;
    if (talk.talk_id.empty()) cur.fail("talk element missing non-empty id attribute");
    if (!seen_ids.insert(talk.talk_id).second)
      throw ValidationError("duplicate talk_id " + talk.talk_id);

    for (;;) {
      cur.skip_misc();
      read_text(cur);
      cur.skip_misc();
      if (cur.eof()) cur.fail("unterminated <talk>");
      if (cur.text.substr(cur.pos, 2) == "</") {
        read_close_tag(cur, "talk");
        break;
      }
      cur.expect('<');
      std::string child = read_name(cur);
      if (child == "title") {
        auto attrs = read_attributes(cur);
        (void)attrs;
        cur.expect('>');
        talk.title = unicode::normalize_whitespace(read_text(cur));
        read_close_tag(cur, "title");
      } else if (child == "caption") {
        auto attrs = read_attributes(cur);
        Caption cap;
        cap.start_ms = parse_ms_attr(cur, attrs, "start");
        cap.end_ms = parse_ms_attr(cur, attrs, "end");
        cur.expect('>');
        cap.text = unicode::normalize_whitespace(read_text(cur));
        read_close_tag(cur, "caption");
        talk.captions.push_back(std::move(cap));
      } else {
        cur.fail("unexpected element <" + child + "> in <talk>");
      }
    }
    finalize_captions(talk.captions, talk.talk_id);
    collection.talks.push_back(std::move(talk));
  }
  return collection;
}

Talk parse_srt(std::string_view content, std::string talk_id, std::string language,
               std::vector<std::string>* warnings) {
  content = unicode::strip_bom(content);
  require_utf8(content);
  Talk talk;
  talk.talk_id = std::move(talk_id);
  talk.language = std::move(language);

  std::istringstream in{std::string(content)};
  std::string line;
  int cue_no = 0;
  while (std::getline(in, line)) {
    line = rstrip_cr(line);
    if (line.empty()) continue;
    ++cue_no;
    // Counter line; tolerate a cue starting directly with the timestamps.
    std::string ts_line = line;
    bool counter_like = std::all_of(line.begin(), line.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
    if (counter_like) {
      if (!std::getline(in, ts_line))
        throw ParseError("cue " + std::to_string(cue_no) + ": missing timestamp line");
      ts_line = rstrip_cr(ts_line);
    }
    std::size_t arrow = ts_line.find(" --> ");
    std::int64_t start = 0, end = 0;
    if (arrow == std::string::npos ||
        !parse_clock(ts_line.substr(0, arrow), ',', start) ||
        !parse_clock(ts_line.substr(arrow + 5), ',', end))
      throw ParseError("cue " + std::to_string(cue_no) + ": malformed timestamp line '" +
                       ts_line + "'");

    std::string text;
    while (std::getline(in, line)) {
      line = rstrip_cr(line);
      if (line.empty()) break;
      if (!text.empty()) text.push_back(' ');
      text += line;
    }
    text = unicode::normalize_whitespace(text);
    if (text.empty()) {
      if (warnings)
        warnings->push_back("cue " + std::to_string(cue_no) + ": empty text, skipped");
      continue;
    }
    Caption cap;
    cap.start_ms = start;
    cap.end_ms = end;
    cap.text = std::move(text);
    talk.captions.push_back(std::move(cap));
  }
  finalize_captions(talk.captions, talk.talk_id.empty() ? "<srt>" : talk.talk_id);
  return talk;
}

Talk parse_vtt(std::string_view content, std::string talk_id, std::string language,
               std::vector<std::string>* warnings) {
  content = unicode::strip_bom(content);
  require_utf8(content);
  std::istringstream in{std::string(content)};
  std::string line;
  if (!std::getline(in, line) || rstrip_cr(line).substr(0, 6) != "WEBVTT")
    throw ParseError("missing WEBVTT header");

  Talk talk;
  talk.talk_id = std::move(talk_id);
  talk.language = std::move(language);

  int cue_no = 0;
  while (std::getline(in, line)) {
    line = rstrip_cr(line);
    if (line.empty()) continue;
    // Skip NOTE/STYLE/REGION blocks.
    if (line.rfind("NOTE", 0) == 0 || line == "STYLE" || line == "REGION") {
      while (std::getline(in, line) && !rstrip_cr(line).empty()) {}
      continue;
    }
    ++cue_no;
    std::string ts_line = line;
    if (ts_line.find("-->") == std::string::npos) {
      // Optional cue identifier line.
      if (!std::getline(in, ts_line))
        throw ParseError("cue " + std::to_string(cue_no) + ": missing timestamp line");
      ts_line = rstrip_cr(ts_line);
    }
    std::size_t arrow = ts_line.find(" --> ");
    if (arrow == std::string::npos)
      throw ParseError("cue " + std::to_string(cue_no) + ": malformed cue timing '" +
                       ts_line + "'");
    std::string end_part = ts_line.substr(arrow + 5);
    // Cue settings after the end timestamp are dropped.
    if (std::size_t sp = end_part.find(' '); sp != std::string::npos)
      end_part = end_part.substr(0, sp);
    std::int64_t start = 0, end = 0;
    if (!parse_clock(ts_line.substr(0, arrow), '.', start) ||
        !parse_clock(end_part, '.', end))
      throw ParseError("cue " + std::to_string(cue_no) + ": malformed cue timing '" +
                       ts_line + "'");

    std::string text;
    while (std::getline(in, line)) {
      line = rstrip_cr(line);
      if (line.empty()) break;
      if (!text.empty()) text.push_back(' ');
      text += line;
    }
    text = unicode::normalize_whitespace(text);
    if (text.empty()) {
      if (warnings)
        warnings->push_back("cue " + std::to_string(cue_no) + ": empty text, skipped");
      continue;
    }
    Caption cap;
    cap.start_ms = start;
    cap.end_ms = end;
    cap.text = std::move(text);
    talk.captions.push_back(std::move(cap));
  }
  finalize_captions(talk.captions, talk.talk_id.empty() ? "<vtt>" : talk.talk_id);
  return talk;
}

std::vector<std::string> intersect_collections(
    const std::vector<TalkCollection>& collections) {
  if (collections.size() < 2)
    throw ValidationError("intersect_collections needs at least 2 collections");
  std::set<std::string> common;
  for (const Talk& t : collections[0].talks) common.insert(t.talk_id);
  for (std::size_t i = 1; i < collections.size(); ++i) {
    std::set<std::string> here;
    for (const Talk& t : collections[i].talks) here.insert(t.talk_id);
    std::set<std::string> kept;
    std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                          std::inserter(kept, kept.begin()));
    common.swap(kept);
  }
  return {common.begin(), common.end()};
}

std::string to_collection_xml(const TalkCollection& collection) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<collection language=\"" << xml_escape(collection.language) << "\">\n";
  for (const Talk& t : collection.talks) {
    out << "  <talk id=\"" << xml_escape(t.talk_id) << "\">\n";
    if (!t.title.empty())
      out << "    <title>" << xml_escape(t.title) << "</title>\n";
    for (const Caption& c : t.captions)
      out << "    <caption start=\"" << c.start_ms << "\" end=\"" << c.end_ms
          << "\">" << xml_escape(c.text) << "</caption>\n";
    out << "  </talk>\n";
  }
  out << "</collection>\n";
  return out.str();
}

std::string to_srt(const Talk& talk) {
  std::ostringstream out;
  for (const Caption& c : talk.captions) {
    out << (c.index + 1) << '\n'
        << format_clock(c.start_ms, ',') << " --> " << format_clock(c.end_ms, ',')
        << '\n'
        << c.text << "\n\n";
  }
  return out.str();
}

std::string to_vtt(const Talk& talk) {
  std::ostringstream out;
  out << "WEBVTT\n\n";
  for (const Caption& c : talk.captions) {
    out << format_clock(c.start_ms, '.') << " --> " << format_clock(c.end_ms, '.')
        << '\n'
        << c.text << "\n\n";
  }
  return out.str();
}

}  // namespace pivotalign::ingest
