#ifndef XLPROJ_CONFIG_HPP_
#define XLPROJ_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "xlproj/audit.hpp"
#include "xlproj/embed.hpp"
#include "xlproj/project.hpp"
#include "xlproj/standoff.hpp"

namespace xlproj {

// Settings for a whole run. The config file is a flat JSON object whose keys
// are the dotted names below; unknown keys are rejected. Relative paths are
// resolved against the config file's directory.
//
//   embed.backend                "mock" | "http"
//   embed.endpoint               base URL of the embedding service
//   embed.batch_size             items per request
//   embed.max_concurrent_batches requests in flight
//   embed.mock_dim               mock vector dimension
//   align.max_bead               max sentences per bead side
//   align.null_penalty           cost of an unaligned sentence
//   align.size_penalty           cost per sentence beyond 1-1
//   wordalign.min_score          drop word edges below this similarity
//   segment.abbreviations        abbreviation list file
//   audit.stoplist               boundary stopword file
//   audit.min_target_len         TOO_SHORT threshold (codepoints)
//   audit.inflation_abs          LENGTH_INFLATION extra words
//   audit.inflation_ratio        LENGTH_INFLATION word ratio
//   eval.label_sensitive         require equal labels when matching
//   scheme.default               scheme of bare note codes
//   scheme.from, scheme.to       enrichment mapping schemes
//   lang.src, lang.tgt           language tags of the corpora
//   jobs                         parallel documents
struct PipelineConfig {
  EmbedConfig embed;
  ProjectionParams projection;
  AuditConfig audit;
  StandoffOptions standoff;
  bool label_sensitive = true;
  std::string scheme_from = "ICD-O";
  std::string scheme_to = "SNOMED-CT";
  std::string src_lang = "es";
  std::string tgt_lang = "fr";
  size_t jobs = 0;  // 0 = available parallelism

  void validate() const;
};

// Applies the keys of a flat JSON object to `config`; throws Error(kConfig).
void apply_config(PipelineConfig& config, std::string_view json_text,
                  const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

// XLPROJ_ENDPOINT, when set, replaces embed.endpoint.
void apply_environment(PipelineConfig& config);

}  // namespace xlproj

#endif  // XLPROJ_CONFIG_HPP_
