#include "xlproj/standoff.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "xlproj/error.hpp"
#include "xlproj/fsutil.hpp"
#include "xlproj/unicode.hpp"

namespace xlproj {
namespace {

// Brat writes multi-line surfaces with the line breaks flattened; compare and
// emit surfaces in that flattened form.
std::string flatten(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

bool parse_size(std::string_view s, size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void malformed(size_t line_no, std::string_view line, std::string_view why) {
  throw Error(ErrorCode::kMalformedLine, "line " + std::to_string(line_no) + " (" +
                                             std::string(why) + "): " + std::string(line));
}

Code parse_code(std::string_view raw, const StandoffOptions& options) {
  auto colon = raw.find(':');
  if (colon == std::string_view::npos) return {options.default_scheme, std::string(raw)};
  return {std::string(raw.substr(0, colon)), std::string(raw.substr(colon + 1))};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Annotation parse_text_bound(std::string_view line, size_t line_no, const Document& doc) {
  size_t tab1 = line.find('\t');
  size_t tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
  if (tab2 == std::string_view::npos) malformed(line_no, line, "expected 3 tab-separated fields");
  Annotation ann;
  ann.id = std::string(line.substr(0, tab1));
  auto middle = line.substr(tab1 + 1, tab2 - tab1 - 1);
  auto text = line.substr(tab2 + 1);
  size_t sp = middle.find(' ');
  if (ann.id.size() < 2 || sp == std::string_view::npos || sp == 0) {
    malformed(line_no, line, "expected '<label> <start> <end>'");
  }
  ann.label = std::string(middle.substr(0, sp));
  auto offsets = middle.substr(sp + 1);

  std::vector<std::pair<size_t, size_t>> fragments;
  while (true) {
    size_t semi = offsets.find(';');
    auto frag = offsets.substr(0, semi);
    size_t fsp = frag.find(' ');
    size_t s = 0, e = 0;
    if (fsp == std::string_view::npos || !parse_size(frag.substr(0, fsp), s) ||
        !parse_size(frag.substr(fsp + 1), e)) {
      malformed(line_no, line, "bad offsets");
    }
    if (s >= e || e > doc.length()) {
      throw Error(ErrorCode::kOffsetOutOfRange,
                  doc.id() + " " + ann.id + ": [" + std::to_string(s) + ", " +
                      std::to_string(e) + ") in document of length " +
                      std::to_string(doc.length()));
    }
    fragments.emplace_back(s, e);
    if (semi == std::string_view::npos) break;
    offsets.remove_prefix(semi + 1);
  }

  std::string expected;
  for (size_t i = 0; i < fragments.size(); ++i) {
    if (i > 0) expected += ' ';
    expected += doc.slice(fragments[i].first, fragments[i].second);
  }
  if (flatten(expected) != flatten(text)) {
    throw Error(ErrorCode::kSurfaceMismatch, doc.id() + " " + ann.id + ": file has '" +
                                                 std::string(text) + "', document has '" +
                                                 expected + "'");
  }
  ann.start = fragments.front().first;
  ann.end = fragments.front().second;
  for (const auto& [s, e] : fragments) {
    ann.start = std::min(ann.start, s);
    ann.end = std::max(ann.end, e);
  }
  ann.discontinuous = fragments.size() > 1;
  ann.surface = doc.slice(ann.start, ann.end);
  return ann;
}

bool has_forbidden(std::string_view s, std::string_view chars) {
  return s.find_first_of(chars) != std::string_view::npos;
}

}  // namespace

bool is_valid_doc_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return c != '/' && c != '\\' && c != '\0' && c != '\n' && c != '\t';
  });
}

Document::Document(std::string doc_id, std::string text, std::string lang)
    : id_(std::move(doc_id)),
      text_(std::move(text)),
      lang_(std::move(lang)),
      chars_(unicode::decode_utf8(text_)) {
  if (!is_valid_doc_id(id_)) throw Error(ErrorCode::kIo, "invalid document id '" + id_ + "'");
}

std::string Document::slice(size_t start, size_t end) const {
  if (start > end || end > chars_.size()) {
    throw Error(ErrorCode::kOffsetOutOfRange, id_ + ": [" + std::to_string(start) + ", " +
                                                  std::to_string(end) + ")");
  }
  return unicode::encode_utf8(std::u32string_view(chars_).substr(start, end - start));
}

StandoffFile parse_ann(std::string_view ann_text, const Document& doc,
                       const StandoffOptions& options) {
  StandoffFile file;
  auto lines = split_lines(ann_text);
  std::unordered_map<std::string, size_t> by_id;

  for (size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    if (line.empty() || line[0] != 'T') continue;
    auto ann = parse_text_bound(line, i + 1, doc);
    if (!by_id.emplace(ann.id, file.annotations.size()).second) {
      malformed(i + 1, line, "duplicate id " + ann.id);
    }
    file.annotations.push_back(std::move(ann));
  }

  // Notes may legally precede the T-lines they reference, hence two passes.
  for (size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    if (line.empty() || line[0] == 'T') continue;
    if (line[0] != '#') {
      file.opaque_lines.emplace_back(line);
      continue;
    }
    size_t tab1 = line.find('\t');
    size_t tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab1 == std::string_view::npos) malformed(i + 1, line, "note without fields");
    auto middle = line.substr(tab1 + 1, tab2 == std::string_view::npos ? tab2 : tab2 - tab1 - 1);
    constexpr std::string_view kNotes = "AnnotatorNotes ";
    if (middle.substr(0, kNotes.size()) != kNotes) {
      file.opaque_lines.emplace_back(line);
      continue;
    }
    auto target = std::string(middle.substr(kNotes.size()));
    if (target.empty() || target[0] != 'T') {
      // Notes on relations or events are outside the model.
      file.opaque_lines.emplace_back(line);
      continue;
    }
    auto it = by_id.find(target);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kDanglingNote,
                  doc.id() + " line " + std::to_string(i + 1) + " references " + target);
    }
    if (tab2 == std::string_view::npos) malformed(i + 1, line, "note without value");
    auto value = trim(line.substr(tab2 + 1));
    if (value.empty()) malformed(i + 1, line, "empty note value");
    auto code = parse_code(value, options);
    auto& codes = file.annotations[it->second].codes;
    if (std::find(codes.begin(), codes.end(), code) == codes.end()) {
      codes.push_back(std::move(code));
    }
  }
  return file;
}

bool ann_id_less(std::string_view a, std::string_view b) {
  auto numeric = [](std::string_view id, size_t& n) {
    return id.size() > 1 && id[0] == 'T' && parse_size(id.substr(1), n);
  };
  size_t na = 0, nb = 0;
  if (numeric(a, na) && numeric(b, nb) && na != nb) return na < nb;
  return a < b;
}

void sort_canonical(std::vector<Annotation>& annotations) {
  std::stable_sort(annotations.begin(), annotations.end(),
                   [](const Annotation& x, const Annotation& y) {
                     if (x.start != y.start) return x.start < y.start;
                     if (x.end != y.end) return x.end < y.end;
                     return ann_id_less(x.id, y.id);
                   });
}

std::string serialize_ann(std::span<const Annotation> annotations,
                          std::span<const std::string> opaque_lines,
                          const StandoffOptions& options) {
  std::vector<Annotation> sorted(annotations.begin(), annotations.end());
  std::set<std::string> ids;
  for (const auto& a : sorted) {
    auto where = "annotation '" + a.id + "'";
    if (a.id.size() < 2 || a.id[0] != 'T' || has_forbidden(a.id, " \t\n\r")) {
      throw Error(ErrorCode::kInvalidAnnotation, where + ": bad id");
    }
    if (!ids.insert(a.id).second) throw Error(ErrorCode::kInvalidAnnotation, where + ": duplicate id");
    if (a.label.empty() || has_forbidden(a.label, " \t\n\r")) {
      throw Error(ErrorCode::kInvalidAnnotation, where + ": bad label");
    }
    if (a.start >= a.end) throw Error(ErrorCode::kInvalidAnnotation, where + ": empty span");
    for (const auto& c : a.codes) {
      if (c.scheme.empty() || c.value.empty() || has_forbidden(c.scheme, ":\t\n\r") ||
          has_forbidden(c.value, "\t\n\r")) {
        throw Error(ErrorCode::kInvalidAnnotation, where + ": bad code");
      }
    }
  }
  sort_canonical(sorted);

  std::string out;
  for (const auto& a : sorted) {
    out += a.id + '\t' + a.label + ' ' + std::to_string(a.start) + ' ' + std::to_string(a.end) +
           '\t' + flatten(a.surface) + '\n';
  }
  size_t note = 0;
  for (const auto& a : sorted) {
    for (const auto& c : a.codes) {
      out += '#' + std::to_string(++note) + "\tAnnotatorNotes " + a.id + '\t';
      bool bare = c.scheme == options.default_scheme && c.value.find(':') == std::string::npos;
      out += bare ? c.value : c.scheme + ':' + c.value;
      out += '\n';
    }
  }
  for (const auto& line : opaque_lines) out += line + '\n';
  return out;
}

const CorpusEntry* Corpus::find(std::string_view doc_id) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), doc_id,
                             [](const CorpusEntry& e, std::string_view id) {
                               return e.document.id() < id;
                             });
  return (it != entries.end() && it->document.id() == doc_id) ? &*it : nullptr;
}

size_t Corpus::annotation_count() const {
  size_t n = 0;
  for (const auto& e : entries) n += e.annotations.size();
  return n;
}

size_t Corpus::code_count() const {
  size_t n = 0;
  for (const auto& e : entries) {
    for (const auto& a : e.annotations) n += a.codes.size();
  }
  return n;
}

Corpus load_corpus(const std::filesystem::path& dir, const std::string& lang,
                   const StandoffOptions& options, bool read_annotations) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  std::vector<fs::path> texts;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      texts.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(texts.begin(), texts.end());

  Corpus corpus;
  corpus.entries.reserve(texts.size());
  for (const auto& txt : texts) {
    auto id = txt.stem().string();
    auto ann_path = txt;
    ann_path.replace_extension(".ann");
    try {
      Document doc(id, read_file(txt), lang);
      StandoffFile file;
      if (read_annotations && fs::exists(ann_path)) file = parse_ann(read_file(ann_path), doc, options);
      corpus.entries.push_back({std::move(doc), std::move(file.annotations),
                                std::move(file.opaque_lines)});
    } catch (const Error& e) {
      throw Error(e.code(), "document '" + id + "': " + e.message());
    }
  }
  std::sort(corpus.entries.begin(), corpus.entries.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) {
              return a.document.id() < b.document.id();
            });
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir,
                 const StandoffOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  // Serialize everything before touching the disk so a bad annotation leaves
  // no partial output behind.
  std::vector<std::string> anns;
  anns.reserve(corpus.entries.size());
  for (const auto& e : corpus.entries) {
    anns.push_back(serialize_ann(e.annotations, e.opaque_lines, options));
  }
  for (size_t i = 0; i < corpus.entries.size(); ++i) {
    const auto& id = corpus.entries[i].document.id();
    write_file_atomic(dir / (id + ".txt"), corpus.entries[i].document.text());
    write_file_atomic(dir / (id + ".ann"), anns[i]);
  }
}

std::string_view violation_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kOffsetOutOfRange: return "OffsetOutOfRange";
    case Violation::Kind::kSurfaceMismatch: return "SurfaceMismatch";
    case Violation::Kind::kDuplicateId: return "DuplicateId";
    case Violation::Kind::kDuplicateCode: return "DuplicateCode";
  }
  return "Violation";
}

std::vector<Violation> validate(const Corpus& corpus) {
  std::vector<Violation> out;
  for (const auto& entry : corpus.entries) {
    const auto& doc = entry.document;
    std::unordered_set<std::string> seen;
    for (const auto& a : entry.annotations) {
      if (!seen.insert(a.id).second) {
        out.push_back({Violation::Kind::kDuplicateId, doc.id(), a.id, "duplicate annotation id"});
      }
      if (a.start >= a.end || a.end > doc.length()) {
        out.push_back({Violation::Kind::kOffsetOutOfRange, doc.id(), a.id,
                       "[" + std::to_string(a.start) + ", " + std::to_string(a.end) +
                           ") outside document of length " + std::to_string(doc.length())});
      } else if (doc.slice(a.start, a.end) != a.surface) {
        out.push_back({Violation::Kind::kSurfaceMismatch, doc.id(), a.id,
                       "surface '" + a.surface + "' differs from document text"});
      }
      std::set<Code> codes(a.codes.begin(), a.codes.end());
      if (codes.size() != a.codes.size()) {
        out.push_back({Violation::Kind::kDuplicateCode, doc.id(), a.id, "repeated code"});
      }
    }
  }
  return out;
}

}  // namespace xlproj
