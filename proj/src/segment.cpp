#include "xlproj/segment.hpp"

#include <algorithm>

#include "xlproj/error.hpp"
#include "xlproj/fsutil.hpp"
#include "xlproj/unicode.hpp"

namespace xlproj {
namespace {

using unicode::is_space;

constexpr std::string_view kDefaultAbbreviations[] = {
    // Titles.
    "Dr.", "Dra.", "Drs.", "Dres.", "Sr.", "Sra.", "Srta.", "Sres.", "Mme.", "Mmes.", "Mlle.",
    "M.", "MM.", "Pr.", "Prof.", "Profa.", "Dña.", "D.",
    // Clinical and general shorthand.
    "approx.", "aprox.", "env.", "cf.", "vs.", "etc.", "ej.", "p.ej.", "p.", "pp.", "pág.",
    "págs.", "fig.", "Fig.", "núm.", "nº.", "n°.", "no.", "vol.", "cap.", "máx.", "mín.",
    "max.", "min.", "sem.", "hab.", "dcha.", "izq.", "izda.", "ant.", "post.",
    "gr.", "cc.", "mill.", "Hosp.", "Serv.", "Dpto.", "Unid.", "Av.", "av.",
};

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

bool is_closer(char32_t c) {
  return c == U'"' || c == U')' || c == U']' || c == U'»' || c == U'”' || c == U'’' ||
         c == U'\'';
}

bool is_opener(char32_t c) {
  return c == U'"' || c == U'(' || c == U'[' || c == U'«' || c == U'“' || c == U'¿' ||
         c == U'¡' || c == U'‘' || c == U'\'' || c == U'-' || c == U'\u2014' || c == U'\u2013';
}

bool is_word_char(char32_t c) { return unicode::is_alnum(c) || unicode::is_mark(c); }

bool is_hyphen(char32_t c) { return c == U'-' || c == U'‐' || c == U'‑'; }

}  // namespace

const Abbreviations& Abbreviations::defaults() {
  static const Abbreviations instance = [] {
    std::set<std::u32string> entries;
    for (auto a : kDefaultAbbreviations) entries.insert(unicode::decode_utf8(a));
    return Abbreviations(std::move(entries));
  }();
  return instance;
}

Abbreviations Abbreviations::parse(std::string_view text) {
  std::set<std::u32string> entries;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (!line.empty()) entries.insert(unicode::decode_utf8(line));
    pos = nl + 1;
  }
  return Abbreviations(std::move(entries));
}

Abbreviations Abbreviations::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

std::vector<Sentence> split_sentences(std::u32string_view text,
                                      const Abbreviations& abbreviations) {
  std::vector<Sentence> out;
  const size_t n = text.size();

  auto emit = [&](size_t from, size_t to) {
    while (from < to && is_space(text[from])) ++from;
    while (to > from && is_space(text[to - 1])) --to;
    if (from < to) out.push_back({out.size(), from, to});
  };

  size_t start = 0;
  size_t i = 0;
  while (i < n) {
    char32_t c = text[i];

    if (c == U'\n') {
      // A blank line is a hard break.
      size_t j = i + 1;
      while (j < n && is_space(text[j]) && text[j] != U'\n') ++j;
      if (j < n && text[j] == U'\n') {
        emit(start, i);
        while (j < n && is_space(text[j])) ++j;
        start = i = j;
        continue;
      }
      ++i;
      continue;
    }

    if (!is_terminator(c)) {
      ++i;
      continue;
    }

    size_t run_end = i;
    while (run_end < n && is_terminator(text[run_end])) ++run_end;
    size_t close_end = run_end;
    while (close_end < n && is_closer(text[close_end])) ++close_end;
    size_t next = close_end;
    while (next < n && is_space(text[next])) ++next;
    if (next == close_end || next == n) {
      i = run_end;
      continue;
    }
    size_t lead = next;
    while (lead < n && is_opener(text[lead])) ++lead;
    if (lead == n || !(unicode::is_upper(text[lead]) || unicode::is_digit(text[lead]))) {
      i = run_end;
      continue;
    }
    if (c == U'.' && run_end == i + 1) {
      size_t w = i;
      while (w > start && !is_space(text[w - 1])) --w;
      while (w < i && is_opener(text[w])) ++w;
      if (abbreviations.contains(text.substr(w, i + 1 - w))) {
        i = run_end;
        continue;
      }
    }
    emit(start, close_end);
    start = i = next;
  }
  emit(start, n);
  return out;
}

std::vector<Sentence> split_sentences(const Document& doc, const Abbreviations& abbreviations) {
  return split_sentences(std::u32string_view(doc.chars()), abbreviations);
}

std::vector<Token> tokenize(std::u32string_view text, const Sentence& sent) {
  std::vector<Token> out;
  const size_t end = std::min(sent.end, text.size());
  auto emit = [&](size_t s, size_t e) {
    out.push_back({sent.index, out.size(), s, e, unicode::encode_utf8(text.substr(s, e - s))});
  };

  size_t i = sent.start;
  while (i < end) {
    char32_t c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (!is_word_char(c)) {
      emit(i, i + 1);
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < end) {
      char32_t d = text[j];
      if (is_word_char(d)) {
        ++j;
        continue;
      }
      bool flanked = j + 1 < end && is_word_char(text[j - 1]) && is_word_char(text[j + 1]);
      if (flanked && is_hyphen(d)) {
        j += 2;
        continue;
      }
      if (flanked && (d == U',' || d == U'.') && unicode::is_digit(text[j - 1]) &&
          unicode::is_digit(text[j + 1])) {
        j += 2;
        continue;
      }
      if (flanked && unicode::is_apostrophe(d) && unicode::is_letter(text[j + 1])) {
        // French elision: "l'hépatite" -> "l'" + "hépatite".
        ++j;
      }
      break;
    }
    emit(i, j);
    i = j;
  }
  return out;
}

std::vector<Token> tokenize(const Document& doc, const Sentence& sent) {
  if (sent.start > sent.end || sent.end > doc.length()) {
    throw Error(ErrorCode::kOffsetOutOfRange, "sentence outside document " + doc.id());
  }
  return tokenize(std::u32string_view(doc.chars()), sent);
}

std::vector<Token> tokenize_all(const Document& doc, std::span<const Sentence> sentences) {
  std::vector<Token> out;
  for (const auto& s : sentences) {
    auto tokens = tokenize(doc, s);
    out.insert(out.end(), std::make_move_iterator(tokens.begin()),
               std::make_move_iterator(tokens.end()));
  }
  return out;
}

size_t word_count(std::string_view text) {
  auto chars = unicode::decode_utf8(text);
  auto tokens = tokenize(chars, Sentence{0, 0, chars.size()});
  return static_cast<size_t>(std::count_if(tokens.begin(), tokens.end(), [](const Token& t) {
    auto cps = unicode::decode_utf8(t.surface);
    return std::any_of(cps.begin(), cps.end(), [](char32_t c) { return unicode::is_alnum(c); });
  }));
}

}  // namespace xlproj
