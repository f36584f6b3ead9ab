#include "xlproj/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "xlproj/error.hpp"

namespace xlproj {
namespace {

double ratio(size_t num, size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

Prf prf(size_t hits, size_t predicted, size_t expected) {
  Prf out;
  out.precision = ratio(hits, predicted);
  out.recall = ratio(hits, expected);
  double sum = out.precision + out.recall;
  out.f1 = sum == 0 ? 0.0 : 2 * out.precision * out.recall / sum;
  return out;
}

}  // namespace

MatchResult match_documents(std::span<const Annotation> gold, std::span<const Annotation> system,
                            bool label_sensitive) {
  MatchResult out;
  std::vector<bool> gold_used(gold.size()), sys_used(system.size());

  auto same_label = [&](const Annotation& a, const Annotation& b) {
    return !label_sensitive || a.label == b.label;
  };

  for (size_t g = 0; g < gold.size(); ++g) {
    for (size_t s = 0; s < system.size(); ++s) {
      if (sys_used[s]) continue;
      if (gold[g].start == system[s].start && gold[g].end == system[s].end &&
          same_label(gold[g], system[s])) {
        gold_used[g] = sys_used[s] = true;
        out.pairs.push_back({g, s, true});
        ++out.counts.correct;
        break;
      }
    }
  }

  struct Candidate {
    size_t overlap;
    std::tuple<size_t, size_t, std::string_view> first, second;
    size_t g, s;
  };
  std::vector<Candidate> candidates;
  for (size_t g = 0; g < gold.size(); ++g) {
    if (gold_used[g]) continue;
    for (size_t s = 0; s < system.size(); ++s) {
      if (sys_used[s] || !same_label(gold[g], system[s])) continue;
      size_t lo = std::max(gold[g].start, system[s].start);
      size_t hi = std::min(gold[g].end, system[s].end);
      if (hi <= lo) continue;
      auto kg = std::make_tuple(gold[g].start, gold[g].end, std::string_view(gold[g].label));
      auto ks = std::make_tuple(system[s].start, system[s].end, std::string_view(system[s].label));
      candidates.push_back({hi - lo, std::min(kg, ks), std::max(kg, ks), g, s});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    return std::tie(a.first, a.second, a.g, a.s) < std::tie(b.first, b.second, b.g, b.s);
  });
  for (const auto& c : candidates) {
    if (gold_used[c.g] || sys_used[c.s]) continue;
    gold_used[c.g] = sys_used[c.s] = true;
    out.pairs.push_back({c.g, c.s, false});
    ++out.counts.partial;
  }

  out.counts.missing = static_cast<size_t>(std::count(gold_used.begin(), gold_used.end(), false));
  out.counts.spurious = static_cast<size_t>(std::count(sys_used.begin(), sys_used.end(), false));
  return out;
}

Metrics compute_metrics(const MatchCounts& c) {
  Metrics m;
  size_t predicted = c.correct + c.partial + c.spurious;
  size_t expected = c.correct + c.partial + c.missing;
  m.relaxed = prf(c.correct + c.partial, predicted, expected);
  m.strict = prf(c.correct, predicted, expected);
  return m;
}

std::string format_percent(double r) {
  // Round on the tenth of a percent; the epsilon absorbs binary
  // representation error such as 0.9745 being stored as 0.97449999...
  double tenths = std::floor(r * 1000.0 + 0.5 + 1e-9);
  auto v = static_cast<long long>(tenths);
  return std::to_string(v / 10) + "." + std::to_string(v % 10);
}

EvaluationReport evaluate_corpus(const Corpus& gold, const Corpus& system, bool label_sensitive) {
  EvaluationReport report;
  std::set<std::string> ids;
  for (const auto& e : gold.entries) ids.insert(e.document.id());
  for (const auto& e : system.entries) ids.insert(e.document.id());
  static const std::vector<Annotation> kNone;
  for (const auto& id : ids) {
    const auto* g = gold.find(id);
    const auto* s = system.find(id);
    auto counts = match_documents(g ? g->annotations : kNone, s ? s->annotations : kNone,
                                  label_sensitive)
                      .counts;
    report.total += counts;
    report.per_document.emplace_back(id, counts);
  }
  report.metrics = compute_metrics(report.total);
  return report;
}

std::string metrics_json(const EvaluationReport& report, MetricsMode mode) {
  using nlohmann::ordered_json;
  auto scores = [](const Prf& p) {
    return ordered_json{{"p", p.precision}, {"r", p.recall}, {"f1", p.f1}};
  };
  ordered_json out;
  const auto& c = report.total;
  out["counts"] = {{"correct", c.correct},
                   {"partial", c.partial},
                   {"missing", c.missing},
                   {"spurious", c.spurious}};
  if (mode != MetricsMode::kStrictOnly) out["relaxed"] = scores(report.metrics.relaxed);
  if (mode != MetricsMode::kRelaxedOnly) out["strict"] = scores(report.metrics.strict);
  return out.dump(2) + "\n";
}

std::string per_document_tsv(const EvaluationReport& report) {
  std::string out = "doc_id\tcorrect\tpartial\tmissing\tspurious\n";
  for (const auto& [id, c] : report.per_document) {
    out += id + '\t' + std::to_string(c.correct) + '\t' + std::to_string(c.partial) + '\t' +
           std::to_string(c.missing) + '\t' + std::to_string(c.spurious) + '\n';
  }
  return out;
}

ConceptStats corpus_stats(const Corpus& corpus, std::string_view scheme, size_t top_k) {
  if (top_k == 0) throw Error(ErrorCode::kConfig, "top_k must be >= 1");
  ConceptStats stats;
  std::unordered_map<std::string, std::unordered_map<std::string, size_t>> surfaces;
  std::unordered_map<std::string, size_t> counts;
  size_t any_codes = 0;
  for (const auto& entry : corpus.entries) {
    stats.entity_count += entry.annotations.size();
    for (const auto& a : entry.annotations) {
      any_codes += a.codes.size();
      for (const auto& c : a.codes) {
        if (c.scheme != scheme) continue;
        ++stats.code_count;
        ++counts[c.value];
        ++surfaces[c.value][a.surface];
      }
    }
  }
  if (any_codes > 0 && stats.code_count == 0) {
    throw Error(ErrorCode::kUnknownScheme, "no codes under scheme '" + std::string(scheme) + "'");
  }
  for (const auto& [code, count] : counts) {
    ConceptRow row{code, count, {}};
    size_t best = 0;
    for (const auto& [surface, n] : surfaces[code]) {
      if (n > best || (n == best && surface < row.most_frequent)) {
        best = n;
        row.most_frequent = surface;
      }
    }
    stats.rows.push_back(std::move(row));
  }
  std::sort(stats.rows.begin(), stats.rows.end(), [](const ConceptRow& a, const ConceptRow& b) {
    return a.count != b.count ? a.count > b.count : a.code < b.code;
  });
  if (stats.rows.size() > top_k) stats.rows.resize(top_k);
  return stats;
}

std::string concept_table_tsv(const ConceptStats& stats,
                              const std::map<std::string, std::string>& descriptions) {
  std::string out = "code\tdescription\tcount\tmost_frequent\n";
  for (const auto& row : stats.rows) {
    auto it = descriptions.find(row.code);
    out += row.code + '\t' + (it == descriptions.end() ? "" : it->second) + '\t' +
           std::to_string(row.count) + '\t' + row.most_frequent + '\n';
  }
  return out;
}

}  // namespace xlproj
