#include "xlproj/project.hpp"

#include <algorithm>
#include <set>

#include "xlproj/parallel.hpp"
#include "xlproj/unicode.hpp"

namespace xlproj {
namespace {

std::vector<std::string> sentence_texts(const Document& doc, std::span<const Sentence> sents) {
  std::vector<std::string> out;
  out.reserve(sents.size());
  for (const auto& s : sents) out.push_back(doc.slice(s.start, s.end));
  return out;
}

std::vector<std::vector<std::string>> token_lists(std::span<const Token> tokens,
                                                  size_t sentence_count) {
  std::vector<std::vector<std::string>> out(sentence_count);
  for (const auto& t : tokens) out[t.sent_index].push_back(t.surface);
  return out;
}

EmbeddingMatrix stack(const std::vector<EmbeddingMatrix>& parts, int dim) {
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    rows += p.rows();
    if (p.rows() > 0) dim = static_cast<int>(p.cols());
  }
  EmbeddingMatrix out(rows, dim);
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    if (p.rows() == 0) continue;
    out.middleRows(r, p.rows()) = p;
    r += p.rows();
  }
  return out;
}

// Global token range covered by a sentence range.
std::vector<size_t> token_offsets(std::span<const Token> tokens, size_t sentence_count) {
  std::vector<size_t> first(sentence_count + 1, 0);
  for (const auto& t : tokens) ++first[t.sent_index + 1];
  for (size_t i = 1; i <= sentence_count; ++i) first[i] += first[i - 1];
  return first;
}

}  // namespace

DocumentAlignment align_embedded(std::vector<Sentence> src_sentences,
                                 std::vector<Sentence> tgt_sentences,
                                 std::vector<Token> src_tokens, std::vector<Token> tgt_tokens,
                                 const EmbeddingMatrix& src_sentence_vecs,
                                 const EmbeddingMatrix& tgt_sentence_vecs,
                                 const EmbeddingMatrix& src_token_vecs,
                                 const EmbeddingMatrix& tgt_token_vecs,
                                 const ProjectionParams& params) {
  DocumentAlignment out;
  out.src_sentences = std::move(src_sentences);
  out.tgt_sentences = std::move(tgt_sentences);
  out.src_tokens = std::move(src_tokens);
  out.tgt_tokens = std::move(tgt_tokens);
  out.beads = align_sentences(src_sentence_vecs, tgt_sentence_vecs, params.align);

  auto src_first = token_offsets(out.src_tokens, out.src_sentences.size());
  auto tgt_first = token_offsets(out.tgt_tokens, out.tgt_sentences.size());
  out.src_sentence_bead.assign(out.src_sentences.size(), 0);
  for (size_t b = 0; b < out.beads.size(); ++b) {
    const auto& bead = out.beads[b];
    for (size_t s = bead.src.begin; s < bead.src.end; ++s) out.src_sentence_bead[s] = b;
    Range src_range{src_first[bead.src.begin], src_first[bead.src.end]};
    Range tgt_range{tgt_first[bead.tgt.begin], tgt_first[bead.tgt.end]};
    out.bead_src_tokens.push_back(src_range);
    out.bead_tgt_tokens.push_back(tgt_range);
    if (src_range.empty() || tgt_range.empty()) {
      out.edges.emplace_back();
      continue;
    }
    out.edges.push_back(align_words(
        src_token_vecs.middleRows(static_cast<Eigen::Index>(src_range.begin),
                                  static_cast<Eigen::Index>(src_range.size())),
        tgt_token_vecs.middleRows(static_cast<Eigen::Index>(tgt_range.begin),
                                  static_cast<Eigen::Index>(tgt_range.size())),
        params.words));
  }
  return out;
}

DocumentAlignment align_documents(const Document& src, const Document& tgt,
                                  EmbeddingBackend& backend, const ProjectionParams& params) {
  auto src_sents = split_sentences(src, params.abbreviations);
  auto tgt_sents = split_sentences(tgt, params.abbreviations);
  auto src_tokens = tokenize_all(src, src_sents);
  auto tgt_tokens = tokenize_all(tgt, tgt_sents);

  auto embed_side = [&](const Document& doc, const std::vector<Sentence>& sents,
                        const std::vector<Token>& tokens) {
    std::pair<EmbeddingMatrix, EmbeddingMatrix> vecs;
    if (sents.empty()) return vecs;
    vecs.first = backend.embed_sentences(sentence_texts(doc, sents));
    vecs.second = stack(backend.embed_tokens(token_lists(tokens, sents.size())),
                        static_cast<int>(vecs.first.cols()));
    return vecs;
  };
  auto [src_sv, src_tv] = embed_side(src, src_sents, src_tokens);
  auto [tgt_sv, tgt_tv] = embed_side(tgt, tgt_sents, tgt_tokens);
  return align_embedded(std::move(src_sents), std::move(tgt_sents), std::move(src_tokens),
                        std::move(tgt_tokens), src_sv, tgt_sv, src_tv, tgt_tv, params);
}

ProjectionRecord project_annotation(const Annotation& ann, const DocumentAlignment& alignment,
                                    const Document& tgt_doc) {
  ProjectionRecord rec;
  rec.doc_id = tgt_doc.id();
  rec.src_ann = ann;

  const auto& src_tokens = alignment.src_tokens;
  std::set<size_t> beads;
  std::set<size_t> targets;
  double score_sum = 0;
  size_t edge_count = 0;
  // Tokens are sorted by offset, so the covered ones form a contiguous run.
  auto first = std::partition_point(src_tokens.begin(), src_tokens.end(),
                                    [&](const Token& t) { return t.end <= ann.start; });
  for (auto it = first; it != src_tokens.end() && it->start < ann.end; ++it) {
    auto g = static_cast<size_t>(it - src_tokens.begin());
    size_t bead = alignment.bead_of_src_token(g);
    beads.insert(bead);
    size_t rel = g - alignment.bead_src_tokens[bead].begin;
    const auto& edges = alignment.edges[bead].edges;
    auto lo = std::partition_point(edges.begin(), edges.end(),
                                   [rel](const Edge& e) { return e.src < rel; });
    for (auto e = lo; e != edges.end() && e->src == rel; ++e) {
      targets.insert(alignment.bead_tgt_tokens[bead].begin + e->tgt);
      score_sum += e->score;
      ++edge_count;
    }
  }
  rec.cross_bead = beads.size() > 1;
  if (targets.empty()) return rec;

  size_t lo = *targets.begin();
  size_t hi = *targets.rbegin();
  rec.glued = hi - lo + 1 != targets.size();
  rec.mean_edge_score = score_sum / static_cast<double>(edge_count);

  const auto& chars = tgt_doc.chars();
  Span span{alignment.tgt_tokens[lo].start, alignment.tgt_tokens[hi].end};
  while (span.start < span.end && unicode::is_space(chars[span.start])) ++span.start;
  while (span.end > span.start && unicode::is_space(chars[span.end - 1])) --span.end;
  if (span.start < span.end) {
    rec.tgt_span = span;
    rec.tgt_surface = tgt_doc.slice(span.start, span.end);
  }
  return rec;
}

std::vector<Annotation> emit_annotations(std::span<const ProjectionRecord> records) {
  std::vector<Annotation> out;
  for (const auto& rec : records) {
    if (!rec.tgt_span) continue;
    Annotation a;
    a.id = "T" + std::to_string(out.size() + 1);
    a.label = rec.src_ann.label;
    a.start = rec.tgt_span->start;
    a.end = rec.tgt_span->end;
    a.surface = rec.tgt_surface.value_or("");
    a.codes = rec.src_ann.codes;
    out.push_back(std::move(a));
  }
  return out;
}

DocumentProjection project_document(const Document& src_doc, const Document& tgt_doc,
                                    std::span<const Annotation> src_anns,
                                    EmbeddingBackend& backend, const ProjectionParams& params) {
  DocumentProjection out;
  if (src_anns.empty()) return out;
  auto alignment = align_documents(src_doc, tgt_doc, backend, params);
  out.records.reserve(src_anns.size());
  for (const auto& ann : src_anns) {
    out.records.push_back(project_annotation(ann, alignment, tgt_doc));
  }
  out.annotations = emit_annotations(out.records);
  return out;
}

CorpusProjection project_corpus(const Corpus& src, const Corpus& tgt_texts,
                                EmbeddingBackend& backend, const ProjectionParams& params,
                                size_t jobs) {
  const size_t n = src.entries.size();
  std::vector<std::optional<DocumentProjection>> results(n);
  parallel_for(n, jobs, [&](size_t i) {
    const auto& entry = src.entries[i];
    const auto* tgt = tgt_texts.find(entry.document.id());
    if (tgt == nullptr) return;
    results[i] = project_document(entry.document, tgt->document, entry.annotations, backend,
                                  params);
  });

  CorpusProjection out;
  for (size_t i = 0; i < n; ++i) {
    const auto& entry = src.entries[i];
    out.summary.annotations_in += entry.annotations.size();
    if (!results[i]) {
      out.summary.missing_targets.push_back(entry.document.id());
      for (const auto& ann : entry.annotations) {
        ProjectionRecord rec;
        rec.doc_id = entry.document.id();
        rec.src_ann = ann;
        out.records.push_back(std::move(rec));
      }
      continue;
    }
    ++out.summary.documents;
    auto& doc = *results[i];
    out.summary.annotations_out += doc.annotations.size();
    out.corpus.entries.push_back(
        {tgt_texts.find(entry.document.id())->document, std::move(doc.annotations), {}});
    out.records.insert(out.records.end(), std::make_move_iterator(doc.records.begin()),
                       std::make_move_iterator(doc.records.end()));
  }
  out.summary.empty_projections = static_cast<size_t>(std::count_if(
      out.records.begin(), out.records.end(), [](const auto& r) { return !r.tgt_span; }));
  return out;
}

}  // namespace xlproj
