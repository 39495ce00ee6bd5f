#include "pivotalign/textproc.hpp"

#include <cctype>

#include "pivotalign/errors.hpp"
#include "pivotalign/unicode.hpp"

namespace pivotalign::textproc {

namespace {

bool is_ws(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v';
}

bool is_ascii_punct(char32_t cp) {
  return cp < 0x80 && std::ispunct(static_cast<int>(cp));
}

// Detachable punctuation at token edges.
bool is_punct(char32_t cp) {
  if (is_ascii_punct(cp)) return true;
  switch (cp) {
    case 0x00A1:  // inverted exclamation
    case 0x00AB:  // left guillemet
    case 0x00BB:  // right guillemet
    case 0x00BF:  // inverted question
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2018: case 0x2019: case 0x201A: case 0x201B:
    case 0x201C: case 0x201D: case 0x201E: case 0x201F:
    case 0x2026:  // ellipsis
    case 0x2039: case 0x203A:
    case 0x060C:  // Arabic comma
    case 0x061B:  // Arabic semicolon
    case 0x061F:  // Arabic question mark
    case 0x066A:  // Arabic percent
    case 0x06D4:  // Arabic full stop
    case 0x05BE:  // maqaf
    case 0x05F3:  // geresh
    case 0x05F4:  // gershayim
      return true;
    default:
      return false;
  }
}

void tokenize_chunk(const std::vector<char32_t>& chunk,
                    std::vector<std::string>& out) {
  std::size_t begin = 0, end = chunk.size();
  std::vector<char32_t> leading, trailing;
  while (begin < end && is_punct(chunk[begin])) leading.push_back(chunk[begin++]);
  while (end > begin && is_punct(chunk[end - 1])) {
    // "3.5" style decimals keep the internal dot; a dot is only trailing
    // when not between two digits, which is guaranteed here (end-1 is the
    // last character of the remaining core).
    trailing.push_back(chunk[--end]);
  }
  for (char32_t cp : leading) out.push_back(unicode::encode_utf8({cp}));
  if (begin < end)
    out.push_back(unicode::encode_utf8(
        std::vector<char32_t>(chunk.begin() + begin, chunk.begin() + end)));
  for (auto it = trailing.rbegin(); it != trailing.rend(); ++it)
    out.push_back(unicode::encode_utf8({*it}));
}

const LangProfile kDefaultProfile{"default", {}, "default"};
const LangProfile kArabicProfile{"arabic", {"arabic_orthography"}, "default"};
const LangProfile kHebrewProfile{"hebrew", {}, "default"};

}  // namespace

const LangProfile& profile(std::string_view name) {
  if (name == "default") return kDefaultProfile;
  if (name == "arabic") return kArabicProfile;
  if (name == "hebrew") return kHebrewProfile;
  throw ValidationError("unknown language profile: " + std::string(name));
}

const LangProfile& profile_for_language(std::string_view code) {
  if (code.rfind("ar", 0) == 0) return kArabicProfile;
  if (code.rfind("he", 0) == 0 || code.rfind("iw", 0) == 0) return kHebrewProfile;
  return kDefaultProfile;
}

std::vector<std::string> tokenize(std::string_view text, const LangProfile& prof) {
  (void)prof;  // one tokenizer rule set for now; edge rules are script-neutral
  std::vector<std::string> out;
  std::vector<char32_t> chunk;
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (is_ws(cp)) {
      if (!chunk.empty()) {
        tokenize_chunk(chunk, out);
        chunk.clear();
      }
    } else {
      chunk.push_back(cp);
    }
  }
  if (!chunk.empty()) tokenize_chunk(chunk, out);
  return out;
}

std::string normalize(std::string_view text, const LangProfile& prof) {
  std::string result{text};
  for (const std::string& rule : prof.normalize_rules) {
    if (rule == "arabic_orthography") {
      result = normalize_arabic(result);
    } else {
      throw ValidationError("unknown normalize rule: " + rule);
    }
  }
  return result;
}

std::string normalize_arabic(std::string_view text) {
  std::vector<char32_t> out;
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (cp == 0x0640) continue;                      // tatweel
    if (cp >= 0x064B && cp <= 0x0652) continue;      // harakat
    if (cp == 0x0670) continue;                      // superscript alef
    if (cp == 0x0622 || cp == 0x0623 || cp == 0x0625 || cp == 0x0671)
      cp = 0x0627;                                   // alef variants -> alef
    else if (cp == 0x0649)
      cp = 0x064A;                                   // alef maqsura -> yeh
    out.push_back(cp);
  }
  return unicode::encode_utf8(out);
}

long count_tokens(std::span<const std::string> sentences, const LangProfile& prof) {
  long total = 0;
  for (const std::string& s : sentences)
    total += static_cast<long>(tokenize(s, prof).size());
  return total;
}

}  // namespace pivotalign::textproc
