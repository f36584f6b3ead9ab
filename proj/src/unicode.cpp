#include "xlproj/unicode.hpp"

#include <algorithm>
#include <cstdint>

#include "xlproj/error.hpp"

namespace xlproj::unicode {
namespace {

struct ClassRange {
  char32_t lo;
  char32_t hi;
  CharClass cls;
};

struct CodepointMap {
  char32_t from;
  char32_t to;
};

#include "unicode_tables.inc"

char32_t lookup(const CodepointMap* begin, const CodepointMap* end, char32_t cp) {
  auto it = std::lower_bound(begin, end, cp, [](const CodepointMap& m, char32_t c) {
    return m.from < c;
  });
  return (it != end && it->from == cp) ? it->to : cp;
}

[[noreturn]] void bad_utf8(size_t pos) {
  throw Error(ErrorCode::kInvalidUtf8, "invalid UTF-8 at byte " + std::to_string(pos));
}

}  // namespace

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    auto b0 = static_cast<uint8_t>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int extra;
    char32_t cp;
    char32_t min;
    if ((b0 & 0xE0) == 0xC0) {
      extra = 1, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3, cp = b0 & 0x07, min = 0x10000;
    } else {
      bad_utf8(i);
    }
    if (i + extra >= bytes.size()) bad_utf8(i);
    for (int k = 1; k <= extra; ++k) {
      auto b = static_cast<uint8_t>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) bad_utf8(i);
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) bad_utf8(i);
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append_utf8(out, cp);
  return out;
}

CharClass char_class(char32_t cp) {
  if (cp < 0x80) {
    if (cp >= 'A' && cp <= 'Z') return CharClass::kUpper;
    if (cp >= 'a' && cp <= 'z') return CharClass::kLetter;
    if (cp >= '0' && cp <= '9') return CharClass::kDigit;
    if (cp == ' ' || (cp >= 0x09 && cp <= 0x0D) || (cp >= 0x1C && cp <= 0x1F)) {
      return CharClass::kSpace;
    }
    return CharClass::kOther;
  }
  const auto* end = std::end(kClassRanges);
  auto it = std::upper_bound(std::begin(kClassRanges), end, cp,
                             [](char32_t c, const ClassRange& r) { return c < r.lo; });
  if (it == std::begin(kClassRanges)) return CharClass::kOther;
  --it;
  return cp <= it->hi ? it->cls : CharClass::kOther;
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  return lookup(std::begin(kLowerMap), std::end(kLowerMap), cp);
}

std::u32string to_lower(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t& cp : out) cp = to_lower(cp);
  return out;
}

std::string to_lower_utf8(std::string_view text) {
  return encode_utf8(to_lower(decode_utf8(text)));
}

std::u32string fold(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (is_mark(cp)) continue;
    char32_t base = lookup(std::begin(kBaseMap), std::end(kBaseMap), cp);
    out.push_back(to_lower(base));
  }
  return out;
}

}  // namespace xlproj::unicode
