#ifndef XLPROJ_STANDOFF_HPP_
#define XLPROJ_STANDOFF_HPP_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Brat standoff corpora: paired <id>.txt / <id>.ann files. All offsets are
// Unicode scalar value indices into the document text.
namespace xlproj {

// A terminology link, e.g. {"ICD-O", "8000/6"}.
struct Code {
  std::string scheme;
  std::string value;

  auto operator<=>(const Code&) const = default;
};

class Document {
 public:
  // Throws Error(kInvalidUtf8) for bad text and Error(kIo) for an unusable id.
  Document(std::string doc_id, std::string text, std::string lang);

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }
  const std::string& lang() const { return lang_; }
  const std::u32string& chars() const { return chars_; }
  size_t length() const { return chars_.size(); }

  // UTF-8 text of [start, end); throws Error(kOffsetOutOfRange).
  std::string slice(size_t start, size_t end) const;

 private:
  std::string id_;
  std::string text_;
  std::string lang_;
  std::u32string chars_;
};

bool is_valid_doc_id(std::string_view id);

struct Annotation {
  std::string id;  // Brat "T" id
  std::string label;
  size_t start = 0;
  size_t end = 0;
  std::string surface;
  std::vector<Code> codes;
  // Set when the source line used fragments ("0 4;9 12"); start/end then hold
  // the covering span. Never serialized.
  bool discontinuous = false;

  bool operator==(const Annotation&) const = default;
};

struct StandoffOptions {
  // Scheme given to bare note values that carry no "scheme:" prefix.
  std::string default_scheme = "ICD-O";
};

struct StandoffFile {
  std::vector<Annotation> annotations;  // in file order
  // Relation, event, attribute, and other lines, kept verbatim.
  std::vector<std::string> opaque_lines;
};

StandoffFile parse_ann(std::string_view ann_text, const Document& doc,
                       const StandoffOptions& options = {});

// Canonical form: T-lines sorted by (start, end, id), then one note line per
// code in T order, then the opaque lines. LF line endings.
std::string serialize_ann(std::span<const Annotation> annotations,
                          std::span<const std::string> opaque_lines = {},
                          const StandoffOptions& options = {});

// Orders Brat ids numerically when both are T<digits>.
bool ann_id_less(std::string_view a, std::string_view b);
void sort_canonical(std::vector<Annotation>& annotations);

struct CorpusEntry {
  Document document;
  std::vector<Annotation> annotations;
  std::vector<std::string> opaque_lines;
};

struct Corpus {
  std::vector<CorpusEntry> entries;  // sorted by document id

  const CorpusEntry* find(std::string_view doc_id) const;
  size_t annotation_count() const;
  size_t code_count() const;
};

// Reads every <id>.txt in `dir` with its optional <id>.ann; with
// `read_annotations` false the .ann files are ignored.
Corpus load_corpus(const std::filesystem::path& dir, const std::string& lang,
                   const StandoffOptions& options = {}, bool read_annotations = true);

// Writes <id>.txt and <id>.ann for every entry, each atomically.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir,
                 const StandoffOptions& options = {});

struct Violation {
  enum class Kind { kOffsetOutOfRange, kSurfaceMismatch, kDuplicateId, kDuplicateCode };
  Kind kind;
  std::string doc_id;
  std::string ann_id;
  std::string message;
};

std::string_view violation_name(Violation::Kind kind);

std::vector<Violation> validate(const Corpus& corpus);

}  // namespace xlproj

#endif  // XLPROJ_STANDOFF_HPP_
