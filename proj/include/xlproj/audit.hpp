#ifndef XLPROJ_AUDIT_HPP_
#define XLPROJ_AUDIT_HPP_

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlproj/flags.hpp"
#include "xlproj/project.hpp"

namespace xlproj {

std::set<std::string> default_stoplist();
// One word per line; blank lines and '#' comments ignored; lowercased.
std::set<std::string> parse_stoplist(std::string_view text);
std::set<std::string> load_stoplist(const std::filesystem::path& path);

struct AuditConfig {
  std::set<std::string> stoplist = default_stoplist();
  size_t min_target_len = 3;   // codepoints
  size_t inflation_abs = 2;    // extra words
  double inflation_ratio = 1.5;

  void validate() const;
};

// Per-record patterns, in FlagCode order:
//   ADDED_PUNCT       target has a punctuation character the source lacks
//   TOO_SHORT         target shorter than min_target_len, source not
//   BAD_BOUNDARY_WORD first or last target token is a stopword
//   NO_ALNUM          target has no letter or digit
//   LENGTH_INFLATION  target words >= source words + inflation_abs, or the
//                     word ratio reaches inflation_ratio
//   EMPTY_PROJECTION  nothing was projected
//   CROSS_BEAD_GLUE   the source annotation spanned sentence beads
std::vector<FlagCode> audit_record(const ProjectionRecord& rec, const AuditConfig& cfg);

// Recomputes every record's flags, adding the corpus-level SINGLETON (target
// surface, lowercased, seen once overall) and DUPLICATE (same document and
// target span as another record).
std::vector<ProjectionRecord> audit_corpus(std::vector<ProjectionRecord> records,
                                           const AuditConfig& cfg);

inline Severity record_severity(const ProjectionRecord& rec) { return max_severity(rec.flags); }

// Review report: one header row, then one tab-separated row per record.
// Tabs, newlines, carriage returns, and backslashes inside fields are escaped.
inline constexpr std::string_view kReportColumns[] = {
    "doc_id",     "src_ann_id", "src_label",       "src_start", "src_end",
    "src_surface", "tgt_start", "tgt_end",         "tgt_surface", "codes",
    "mean_edge_score", "glued", "cross_bead",      "flags",     "severity",
};

std::string write_report(std::span<const ProjectionRecord> records);
std::vector<ProjectionRecord> read_report(std::string_view tsv);

// Adds Brat attribute lines ("A<n>\tFalse T<k>" / "A<n>\tSuspicious T<k>") for
// every annotation matching a flagged record by (document, label, span),
// replacing earlier False/Suspicious attributes. Returns the number tagged.
size_t tag_corpus(Corpus& corpus, std::span<const ProjectionRecord> records);

}  // namespace xlproj

#endif  // XLPROJ_AUDIT_HPP_
