#include "xlproj/audit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <tuple>
#include <unordered_map>

#include "xlproj/error.hpp"
#include "xlproj/fsutil.hpp"
#include "xlproj/segment.hpp"
#include "xlproj/unicode.hpp"

namespace xlproj {
namespace {

std::string normalize_word(std::string_view word) {
  auto chars = unicode::to_lower(unicode::decode_utf8(word));
  for (char32_t& c : chars) {
    if (unicode::is_apostrophe(c)) c = U'\'';
  }
  return unicode::encode_utf8(chars);
}

// --- report field encoding ---

std::string escape(std::string_view s, bool escape_bar = false) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '|':
        out += escape_bar ? "\\|" : "|";
        break;
      default: out += c;
    }
  }
  return out;
}

[[noreturn]] void bad_report(size_t line, std::string_view why) {
  throw Error(ErrorCode::kMalformedReport, "line " + std::to_string(line) + ": " +
                                               std::string(why));
}

std::string unescape(std::string_view s, size_t line) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) bad_report(line, "dangling escape");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '|': out += '|'; break;
      default: bad_report(line, "unknown escape");
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view s, size_t line, std::string_view column) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    bad_report(line, "bad number in " + std::string(column));
  }
  return v;
}

bool parse_bool(std::string_view s, size_t line, std::string_view column) {
  if (s == "true") return true;
  if (s == "false") return false;
  bad_report(line, "bad boolean in " + std::string(column));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Splits on '|' not preceded by an escaping backslash; items stay escaped.
std::vector<std::string_view> split_codes(std::string_view s) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
    } else if (s[i] == '|') {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

}  // namespace

std::set<std::string> default_stoplist() {
  return {"et", "ou", "de", "du", "des", "le", "la", "les", "l'", "d'",
          "un", "une", "à", "en", "que", "qui", "au", "aux"};
}

std::set<std::string> parse_stoplist(std::string_view text) {
  std::set<std::string> out;
  for (auto line : split(text, '\n')) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    if (!line.empty()) out.insert(normalize_word(line));
  }
  return out;
}

std::set<std::string> load_stoplist(const std::filesystem::path& path) {
  return parse_stoplist(read_file(path));
}

void AuditConfig::validate() const {
  if (min_target_len == 0 || inflation_abs == 0 || !(inflation_ratio > 0)) {
    throw Error(ErrorCode::kConfig, "audit thresholds must be positive");
  }
}

std::vector<FlagCode> audit_record(const ProjectionRecord& rec, const AuditConfig& cfg) {
  std::vector<FlagCode> flags;
  if (!rec.tgt_span || !rec.tgt_surface) {
    flags.push_back(FlagCode::kEmptyProjection);
    if (rec.cross_bead) flags.push_back(FlagCode::kCrossBeadGlue);
    return flags;
  }
  auto src = unicode::decode_utf8(rec.src_ann.surface);
  auto tgt = unicode::decode_utf8(*rec.tgt_surface);

  bool added_punct = std::any_of(tgt.begin(), tgt.end(), [&](char32_t c) {
    return unicode::is_punct(c) && src.find(c) == std::u32string::npos;
  });
  if (added_punct) flags.push_back(FlagCode::kAddedPunct);

  if (tgt.size() < cfg.min_target_len && src.size() >= cfg.min_target_len) {
    flags.push_back(FlagCode::kTooShort);
  }

  auto tokens = tokenize(tgt, Sentence{0, 0, tgt.size()});
  if (!tokens.empty()) {
    std::string last = tokens.back().surface;
    // A clitic cut off at the span end ("d'") tokenizes as a word plus a
    // bare apostrophe; rejoin them.
    if (tokens.size() > 1 && tokens.back().end - tokens.back().start == 1 &&
        unicode::is_apostrophe(tgt[tokens.back().start]) &&
        tokens[tokens.size() - 2].end == tokens.back().start) {
      last = tokens[tokens.size() - 2].surface + last;
    }
    if (cfg.stoplist.count(normalize_word(tokens.front().surface)) ||
        cfg.stoplist.count(normalize_word(last))) {
      flags.push_back(FlagCode::kBadBoundaryWord);
    }
  }

  if (std::none_of(tgt.begin(), tgt.end(), [](char32_t c) { return unicode::is_alnum(c); })) {
    flags.push_back(FlagCode::kNoAlnum);
  }

  size_t src_words = word_count(rec.src_ann.surface);
  size_t tgt_words = word_count(*rec.tgt_surface);
  if (tgt_words >= src_words + cfg.inflation_abs ||
      (src_words > 0 && static_cast<double>(tgt_words) >=
                            cfg.inflation_ratio * static_cast<double>(src_words))) {
    flags.push_back(FlagCode::kLengthInflation);
  }

  if (rec.cross_bead) flags.push_back(FlagCode::kCrossBeadGlue);
  return flags;
}

std::vector<ProjectionRecord> audit_corpus(std::vector<ProjectionRecord> records,
                                           const AuditConfig& cfg) {
  std::unordered_map<std::string, size_t> surface_freq;
  std::map<std::tuple<std::string, size_t, size_t>, size_t> span_freq;
  std::vector<std::string> folded(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.tgt_span || !r.tgt_surface) continue;
    folded[i] = unicode::to_lower_utf8(*r.tgt_surface);
    ++surface_freq[folded[i]];
    ++span_freq[{r.doc_id, r.tgt_span->start, r.tgt_span->end}];
  }
  for (size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    r.flags = audit_record(r, cfg);
    if (r.tgt_span && r.tgt_surface) {
      if (surface_freq[folded[i]] == 1) r.flags.push_back(FlagCode::kSingleton);
      if (span_freq[{r.doc_id, r.tgt_span->start, r.tgt_span->end}] > 1) {
        r.flags.push_back(FlagCode::kDuplicate);
      }
    }
    std::sort(r.flags.begin(), r.flags.end());
  }
  return records;
}

std::string write_report(std::span<const ProjectionRecord> records) {
  std::string out;
  for (size_t i = 0; i < std::size(kReportColumns); ++i) {
    if (i > 0) out += '\t';
    out += kReportColumns[i];
  }
  out += '\n';
  for (const auto& r : records) {
    std::string codes;
    for (const auto& c : r.src_ann.codes) {
      if (!codes.empty()) codes += '|';
      codes += escape(c.scheme + ":" + c.value, /*escape_bar=*/true);
    }
    std::string flags;
    for (auto f : r.flags) {
      if (!flags.empty()) flags += ',';
      flags += flag_name(f);
    }
    const std::string fields[] = {
        escape(r.doc_id),
        escape(r.src_ann.id),
        escape(r.src_ann.label),
        std::to_string(r.src_ann.start),
        std::to_string(r.src_ann.end),
        escape(r.src_ann.surface),
        r.tgt_span ? std::to_string(r.tgt_span->start) : "",
        r.tgt_span ? std::to_string(r.tgt_span->end) : "",
        r.tgt_surface ? escape(*r.tgt_surface) : "",
        codes,
        format_double(r.mean_edge_score),
        r.glued ? "true" : "false",
        r.cross_bead ? "true" : "false",
        flags,
        std::string(severity_name(record_severity(r))),
    };
    for (size_t i = 0; i < std::size(fields); ++i) {
      if (i > 0) out += '\t';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<ProjectionRecord> read_report(std::string_view tsv) {
  auto lines = split(tsv, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) bad_report(1, "missing header");
  auto header = split(lines[0], '\t');
  if (!std::equal(header.begin(), header.end(), std::begin(kReportColumns),
                  std::end(kReportColumns))) {
    bad_report(1, "unexpected header");
  }

  std::vector<ProjectionRecord> out;
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    size_t line_no = ln + 1;
    auto line = lines[ln];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto f = split(line, '\t');
    if (f.size() != std::size(kReportColumns)) {
      bad_report(line_no, "expected " + std::to_string(std::size(kReportColumns)) + " fields");
    }
    ProjectionRecord r;
    r.doc_id = unescape(f[0], line_no);
    r.src_ann.id = unescape(f[1], line_no);
    r.src_ann.label = unescape(f[2], line_no);
    r.src_ann.start = parse_number<size_t>(f[3], line_no, "src_start");
    r.src_ann.end = parse_number<size_t>(f[4], line_no, "src_end");
    r.src_ann.surface = unescape(f[5], line_no);
    if (f[6].empty() != f[7].empty()) bad_report(line_no, "half-empty target span");
    if (!f[6].empty()) {
      r.tgt_span = Span{parse_number<size_t>(f[6], line_no, "tgt_start"),
                        parse_number<size_t>(f[7], line_no, "tgt_end")};
      if (r.tgt_span->start >= r.tgt_span->end) bad_report(line_no, "empty target span");
      r.tgt_surface = unescape(f[8], line_no);
    } else if (!f[8].empty()) {
      bad_report(line_no, "target surface without span");
    }
    for (auto item : split_codes(f[9])) {
      auto code = unescape(item, line_no);
      auto colon = code.find(':');
      if (colon == std::string::npos) bad_report(line_no, "code without scheme");
      r.src_ann.codes.push_back({code.substr(0, colon), code.substr(colon + 1)});
    }
    r.mean_edge_score = parse_number<double>(f[10], line_no, "mean_edge_score");
    r.glued = parse_bool(f[11], line_no, "glued");
    r.cross_bead = parse_bool(f[12], line_no, "cross_bead");
    if (!f[13].empty()) {
      for (auto name : split(f[13], ',')) {
        auto flag = parse_flag(name);
        if (!flag) bad_report(line_no, "unknown flag " + std::string(name));
        r.flags.push_back(*flag);
      }
    }
    auto severity = parse_severity(f[14]);
    if (!severity || *severity != record_severity(r)) {
      bad_report(line_no, "severity does not match flags");
    }
    out.push_back(std::move(r));
  }
  return out;
}

size_t tag_corpus(Corpus& corpus, std::span<const ProjectionRecord> records) {
  std::map<std::tuple<std::string, std::string, size_t, size_t>, Severity> severity;
  for (const auto& r : records) {
    if (!r.tgt_span) continue;
    auto& s = severity[{r.doc_id, r.src_ann.label, r.tgt_span->start, r.tgt_span->end}];
    s = std::max(s, record_severity(r));
  }

  size_t tagged = 0;
  for (auto& entry : corpus.entries) {
    auto& lines = entry.opaque_lines;
    std::erase_if(lines, [](const std::string& l) {
      auto tab = l.find('\t');
      if (l.empty() || l[0] != 'A' || tab == std::string::npos) return false;
      auto rest = std::string_view(l).substr(tab + 1);
      return rest.starts_with("False ") || rest.starts_with("Suspicious ");
    });
    size_t next_id = 0;
    for (const auto& l : lines) {
      size_t n = 0;
      auto tab = l.find('\t');
      if (l.size() > 1 && l[0] == 'A' && tab != std::string::npos) {
        auto digits = std::string_view(l).substr(1, tab - 1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc()) next_id = std::max(next_id, n);
      }
    }
    auto anns = entry.annotations;
    sort_canonical(anns);
    for (const auto& a : anns) {
      auto it = severity.find({entry.document.id(), a.label, a.start, a.end});
      if (it == severity.end() || it->second == Severity::kClean) continue;
      lines.push_back("A" + std::to_string(++next_id) + '\t' +
                      (it->second == Severity::kFalse ? "False " : "Suspicious ") + a.id);
      ++tagged;
    }
  }
  return tagged;
}

}  // namespace xlproj
