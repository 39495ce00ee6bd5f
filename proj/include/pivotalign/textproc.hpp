#ifndef PIVOTALIGN_TEXTPROC_HPP
#define PIVOTALIGN_TEXTPROC_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pivotalign::textproc {

// Normalization/tokenization rule set for one language. Profiles come from
// the registry ("default", "arabic", "hebrew"); the rules are declared here,
// not borrowed from any external tool.
struct LangProfile {
  std::string name;
  std::vector<std::string> normalize_rules;  // applied in order by normalize()
  std::string tokenizer = "default";
};

// Registry lookup; throws ValidationError for unknown names.
const LangProfile& profile(std::string_view name);

// Picks a registry profile from a language code ("ar*" -> arabic,
// "he*"/"iw*" -> hebrew, else default).
const LangProfile& profile_for_language(std::string_view language_code);

// Whitespace split with leading/trailing punctuation detached as separate
// tokens. Decimal numbers ("3.5") and word-internal apostrophes ("it's")
// stay intact; the Hebrew profile additionally keeps geresh/gershayim
// word-internal.
std::vector<std::string> tokenize(std::string_view text, const LangProfile& profile);

// Applies the profile's normalize_rules to the text.
std::string normalize(std::string_view text, const LangProfile& profile);

// Arabic orthographic normalization: strips tatweel and diacritics, folds
// alef variants to bare alef and alef maqsura to yeh. Idempotent; leaves
// non-Arabic code points untouched.
std::string normalize_arabic(std::string_view text);

// Sum of tokenize() lengths over the sentences.
long count_tokens(std::span<const std::string> sentences, const LangProfile& profile);

}  // namespace pivotalign::textproc

#endif  // PIVOTALIGN_TEXTPROC_HPP
