#ifndef XLPROJ_EVALSTATS_HPP_
#define XLPROJ_EVALSTATS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xlproj/standoff.hpp"

// Span-level scoring of a system corpus against a gold corpus, and concept
// frequency statistics.
namespace xlproj {

struct MatchCounts {
  size_t correct = 0;
  size_t partial = 0;
  size_t missing = 0;
  size_t spurious = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    correct += o.correct;
    partial += o.partial;
    missing += o.missing;
    spurious += o.spurious;
    return *this;
  }
  bool operator==(const MatchCounts&) const = default;
};

struct MatchPair {
  size_t gold = 0;
  size_t system = 0;
  bool exact = false;
};

struct MatchResult {
  MatchCounts counts;
  std::vector<MatchPair> pairs;
};

// Exact (start, end[, label]) pairs are CORRECT. The remaining overlapping
// pairs are matched one-to-one by descending overlap length; ties go to the
// pair whose earlier span comes first, which keeps the result symmetric under
// swapping gold and system. Leftovers are MISSING (gold) or SPURIOUS (system).
MatchResult match_documents(std::span<const Annotation> gold, std::span<const Annotation> system,
                            bool label_sensitive = true);

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Relaxed scores count PARTIAL as a hit, strict ones as a miss. Ratios with a
// zero denominator are 0.
struct Metrics {
  Prf relaxed;
  Prf strict;
};

Metrics compute_metrics(const MatchCounts& counts);

// Percentage with one decimal, rounded half up: 0.97435 -> "97.4".
std::string format_percent(double ratio);

struct EvaluationReport {
  MatchCounts total;
  std::vector<std::pair<std::string, MatchCounts>> per_document;
  Metrics metrics;
};

// Documents present on one side only count entirely as MISSING or SPURIOUS.
EvaluationReport evaluate_corpus(const Corpus& gold, const Corpus& system,
                                 bool label_sensitive = true);

enum class MetricsMode { kBoth, kStrictOnly, kRelaxedOnly };

// {"counts":{...},"relaxed":{"p":..,"r":..,"f1":..},"strict":{...}}
std::string metrics_json(const EvaluationReport& report, MetricsMode mode = MetricsMode::kBoth);
std::string per_document_tsv(const EvaluationReport& report);

struct ConceptRow {
  std::string code;
  size_t count = 0;
  std::string most_frequent;  // modal surface; ties -> lexicographically smallest
};

struct ConceptStats {
  std::vector<ConceptRow> rows;  // count desc, then code asc; at most top_k
  size_t entity_count = 0;       // annotations
  size_t code_count = 0;         // (annotation, code) pairs under the scheme
};

// Throws Error(kUnknownScheme) when the corpus carries codes but none under
// `scheme`.
ConceptStats corpus_stats(const Corpus& corpus, std::string_view scheme, size_t top_k);

// code, description, count, most_frequent
std::string concept_table_tsv(const ConceptStats& stats,
                              const std::map<std::string, std::string>& descriptions = {});

}  // namespace xlproj

#endif  // XLPROJ_EVALSTATS_HPP_
