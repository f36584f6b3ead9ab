#ifndef XLPROJ_UNICODE_HPP_
#define XLPROJ_UNICODE_HPP_

#include <string>
#include <string_view>

// Minimal Unicode support: UTF-8 transcoding plus the character classes the
// segmenter, audit heuristics, and mock embedder rely on. Tables are
// generated (tools/gen_unicode_tables.py) so results never depend on the
// process locale.
namespace xlproj::unicode {

enum class CharClass { kOther, kUpper, kLetter, kMark, kDigit, kSpace };

// Throws Error(kInvalidUtf8) on malformed input, surrogates, or overlongs.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

CharClass char_class(char32_t cp);

inline bool is_upper(char32_t cp) { return char_class(cp) == CharClass::kUpper; }
inline bool is_letter(char32_t cp) {
  auto k = char_class(cp);
  return k == CharClass::kUpper || k == CharClass::kLetter;
}
inline bool is_digit(char32_t cp) { return char_class(cp) == CharClass::kDigit; }
inline bool is_mark(char32_t cp) { return char_class(cp) == CharClass::kMark; }
inline bool is_space(char32_t cp) { return char_class(cp) == CharClass::kSpace; }
inline bool is_alnum(char32_t cp) { return is_letter(cp) || is_digit(cp); }
// Anything that is neither a word character nor whitespace.
inline bool is_punct(char32_t cp) { return char_class(cp) == CharClass::kOther; }
inline bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

char32_t to_lower(char32_t cp);
std::u32string to_lower(std::u32string_view text);
std::string to_lower_utf8(std::string_view text);

// Lowercases and strips combining diacritics ("Métastases" -> "metastases").
std::u32string fold(std::u32string_view text);

}  // namespace xlproj::unicode

#endif  // XLPROJ_UNICODE_HPP_
