#ifndef PIVOTALIGN_UNICODE_HPP
#define PIVOTALIGN_UNICODE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pivotalign::unicode {

// Decodes UTF-8 into Unicode scalar values. Throws ValidationError on
// invalid byte sequences (the toolkit is UTF-8 only).
std::vector<char32_t> decode_utf8(std::string_view text);

// Encodes scalar values back to UTF-8.
std::string encode_utf8(const std::vector<char32_t>& codepoints);
void append_utf8(std::string& out, char32_t cp);

// Number of Unicode scalar values in the string.
std::size_t scalar_length(std::string_view text);

// True if the input is valid UTF-8.
bool is_valid_utf8(std::string_view text);

// Strips a leading UTF-8 BOM, if present.
std::string_view strip_bom(std::string_view text);

// Trims ASCII whitespace at both ends and collapses internal whitespace
// runs (including newlines) to single spaces.
std::string normalize_whitespace(std::string_view text);

}  // namespace pivotalign::unicode

#endif  // PIVOTALIGN_UNICODE_HPP
