#ifndef XLPROJ_PROJECT_HPP_
#define XLPROJ_PROJECT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xlproj/embed.hpp"
#include "xlproj/flags.hpp"
#include "xlproj/segment.hpp"
#include "xlproj/sentalign.hpp"
#include "xlproj/standoff.hpp"
#include "xlproj/wordalign.hpp"

// Annotation projection: sentence beads, per-bead word alignment, and the
// gap-filling rule that turns a source annotation into one contiguous target
// span (the min-max interval over every aligned target token).
namespace xlproj {

struct Span {
  size_t start = 0;
  size_t end = 0;

  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct ProjectionRecord {
  std::string doc_id;
  Annotation src_ann;
  std::optional<Span> tgt_span;
  std::optional<std::string> tgt_surface;
  bool glued = false;       // aligned target tokens were not consecutive
  bool cross_bead = false;  // the source annotation touches more than one bead
  double mean_edge_score = 0;
  std::vector<FlagCode> flags;  // set by audit, in FlagCode order

  bool operator==(const ProjectionRecord&) const = default;
};

struct ProjectionParams {
  AlignParams align;
  WordAlignParams words;
  Abbreviations abbreviations = Abbreviations::defaults();
};

// Segmentation, embeddings, and both alignment levels for one document pair.
struct DocumentAlignment {
  std::vector<Sentence> src_sentences;
  std::vector<Sentence> tgt_sentences;
  std::vector<Token> src_tokens;  // document order
  std::vector<Token> tgt_tokens;
  std::vector<Bead> beads;
  std::vector<Range> bead_src_tokens;  // global token range of each bead
  std::vector<Range> bead_tgt_tokens;
  std::vector<EdgeSet> edges;          // per bead, bead-relative indices
  std::vector<size_t> src_sentence_bead;

  size_t bead_of_src_token(size_t token) const {
    return src_sentence_bead[src_tokens[token].sent_index];
  }
};

DocumentAlignment align_documents(const Document& src, const Document& tgt,
                                  EmbeddingBackend& backend, const ProjectionParams& params);

// Aligns already-computed sentence and token embeddings; align_documents is
// this plus segmentation and embedding calls.
DocumentAlignment align_embedded(std::vector<Sentence> src_sentences,
                                 std::vector<Sentence> tgt_sentences,
                                 std::vector<Token> src_tokens, std::vector<Token> tgt_tokens,
                                 const EmbeddingMatrix& src_sentence_vecs,
                                 const EmbeddingMatrix& tgt_sentence_vecs,
                                 const EmbeddingMatrix& src_token_vecs,
                                 const EmbeddingMatrix& tgt_token_vecs,
                                 const ProjectionParams& params);

ProjectionRecord project_annotation(const Annotation& ann, const DocumentAlignment& alignment,
                                    const Document& tgt_doc);

struct DocumentProjection {
  std::vector<Annotation> annotations;  // ids T1..Tn in source order
  std::vector<ProjectionRecord> records;
};

DocumentProjection project_document(const Document& src_doc, const Document& tgt_doc,
                                    std::span<const Annotation> src_anns,
                                    EmbeddingBackend& backend, const ProjectionParams& params);

// Builds target annotations from records; records without a span emit nothing.
std::vector<Annotation> emit_annotations(std::span<const ProjectionRecord> records);

struct ProjectionSummary {
  size_t documents = 0;
  size_t annotations_in = 0;
  size_t annotations_out = 0;
  size_t empty_projections = 0;
  std::vector<std::string> missing_targets;
};

struct CorpusProjection {
  Corpus corpus;
  std::vector<ProjectionRecord> records;  // document order, then source order
  ProjectionSummary summary;
};

// Source documents without a target text are listed in missing_targets and
// their annotations recorded as empty projections.
CorpusProjection project_corpus(const Corpus& src, const Corpus& tgt_texts,
                                EmbeddingBackend& backend, const ProjectionParams& params,
                                size_t jobs = 1);

}  // namespace xlproj

#endif  // XLPROJ_PROJECT_HPP_
