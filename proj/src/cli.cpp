#include "xlproj/cli.hpp"

#include <charconv>
#include <filesystem>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "xlproj/audit.hpp"
#include "xlproj/config.hpp"
#include "xlproj/enrich.hpp"
#include "xlproj/error.hpp"
#include "xlproj/evalstats.hpp"
#include "xlproj/fsutil.hpp"
#include "xlproj/parallel.hpp"
#include "xlproj/project.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that clashes with Eigen.
#include <httplib.h>

namespace xlproj {
namespace {

namespace fs = std::filesystem;

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kProtocol:
    case ErrorCode::kBatchTooLarge:
    case ErrorCode::kDimensionMismatch:
      return kExitBackend;
    case ErrorCode::kConfig:
      return kExitUsage;
    default:
      return kExitData;
  }
}

struct CommonOptions {
  std::string config_path;
  size_t jobs = 0;

  PipelineConfig load() const {
    PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    apply_environment(config);
    if (jobs > 0) config.jobs = jobs;
    if (config.jobs == 0) config.jobs = default_jobs();
    config.validate();
    return config;
  }
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--jobs", common.jobs, "Documents processed in parallel")
      ->check(CLI::PositiveNumber);
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::map<std::string, std::string> load_descriptions(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::string text = read_file(path);
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    size_t tab = line.find('\t');
    if (line.empty() || tab == std::string_view::npos) continue;
    std::string code(line.substr(0, tab));
    if (code == "code") continue;
    std::string_view rest = line.substr(tab + 1);
    out.emplace(std::move(code), std::string(rest.substr(0, rest.find('\t'))));
  }
  return out;
}

int cmd_project(const CommonOptions& common, const std::string& src, const std::string& tgt,
                const std::string& out_dir, const std::string& report, std::ostream& err) {
  PipelineConfig config = common.load();
  Corpus src_corpus = load_corpus(src, config.src_lang, config.standoff);
  Corpus tgt_texts = load_corpus(tgt, config.tgt_lang, config.standoff, false);
  auto backend = make_backend(config.embed);

  CorpusProjection result =
      project_corpus(src_corpus, tgt_texts, *backend, config.projection, config.jobs);
  auto records = audit_corpus(std::move(result.records), config.audit);
  size_t tagged = tag_corpus(result.corpus, records);
  std::string report_text = write_report(records);

  save_corpus(result.corpus, out_dir, config.standoff);
  write_file_atomic(report, report_text);

  const auto& s = result.summary;
  err << "documents " << s.documents << ", annotations " << s.annotations_in << " -> "
      << s.annotations_out << ", empty " << s.empty_projections << ", flagged " << tagged << '\n';
  for (const auto& id : s.missing_targets) err << "warning: no target text for " << id << '\n';
  return kExitOk;
}

int cmd_audit(const CommonOptions& common, const std::string& corpus_dir,
              const std::string& report, std::ostream& err) {
  PipelineConfig config = common.load();
  auto records = audit_corpus(read_report(read_file(report)), config.audit);
  Corpus corpus = load_corpus(corpus_dir, config.tgt_lang, config.standoff);
  size_t tagged = tag_corpus(corpus, records);
  std::string report_text = write_report(records);
  save_corpus(corpus, corpus_dir, config.standoff);
  write_file_atomic(report, report_text);

  size_t counts[3] = {0, 0, 0};
  for (const auto& r : records) ++counts[static_cast<int>(record_severity(r))];
  err << "records " << records.size() << ", clean " << counts[0] << ", suspicious " << counts[1]
      << ", false " << counts[2] << ", tagged " << tagged << '\n';
  return kExitOk;
}

int cmd_evaluate(const CommonOptions& common, const std::string& gold, const std::string& system,
                 const std::string& out, std::string per_doc, MetricsMode mode,
                 bool label_insensitive, std::ostream& err) {
  PipelineConfig config = common.load();
  Corpus gold_corpus = load_corpus(gold, config.tgt_lang, config.standoff);
  Corpus system_corpus = load_corpus(system, config.tgt_lang, config.standoff);
  auto report =
      evaluate_corpus(gold_corpus, system_corpus, config.label_sensitive && !label_insensitive);
  if (per_doc.empty()) per_doc = out + ".docs.tsv";
  std::string json_text = metrics_json(report, mode);
  std::string tsv = per_document_tsv(report);
  write_file_atomic(out, json_text);
  write_file_atomic(per_doc, tsv);

  const auto& c = report.total;
  const auto& m = report.metrics;
  err << "correct " << c.correct << ", partial " << c.partial << ", missing " << c.missing
      << ", spurious " << c.spurious << '\n';
  if (mode != MetricsMode::kStrictOnly) {
    err << "relaxed P " << format_percent(m.relaxed.precision) << " R "
        << format_percent(m.relaxed.recall) << " F1 " << format_percent(m.relaxed.f1) << '\n';
  }
  if (mode != MetricsMode::kRelaxedOnly) {
    err << "strict  P " << format_percent(m.strict.precision) << " R "
        << format_percent(m.strict.recall) << " F1 " << format_percent(m.strict.f1) << '\n';
  }
  return kExitOk;
}

int cmd_stats(const CommonOptions& common, const std::string& corpus_dir,
              const std::string& scheme, size_t top, const std::string& descriptions,
              std::ostream& out, std::ostream& err) {
  PipelineConfig config = common.load();
  Corpus corpus = load_corpus(corpus_dir, config.tgt_lang, config.standoff);
  auto stats = corpus_stats(corpus, scheme, top);
  std::map<std::string, std::string> desc;
  if (!descriptions.empty()) desc = load_descriptions(descriptions);
  out << concept_table_tsv(stats, desc);
  err << "entities " << stats.entity_count << ", codes " << stats.code_count << '\n';
  return kExitOk;
}

int cmd_enrich(const CommonOptions& common, const std::string& corpus_dir, const std::string& map,
               const std::string& out_dir, std::ostream& err) {
  PipelineConfig config = common.load();
  Corpus corpus = load_corpus(corpus_dir, config.tgt_lang, config.standoff);
  CodeMap code_map = load_mapping(map, config.scheme_from, config.scheme_to);
  auto result = enrich_corpus(std::move(corpus), code_map);
  save_corpus(result.corpus, out_dir, config.standoff);
  if (code_map.duplicate_rows > 0) {
    err << "warning: " << code_map.duplicate_rows << " duplicate mapping rows ignored\n";
  }
  err << "codes " << result.corpus.code_count() - result.added_count << " + "
      << result.added_count << " = " << result.corpus.code_count() << '\n';
  return kExitOk;
}

int cmd_align_debug(const CommonOptions& common, const std::string& src, const std::string& tgt,
                    bool words, std::ostream& out) {
  PipelineConfig config = common.load();
  fs::path src_path(src);
  Document src_doc(src_path.stem().string(), read_file(src_path), config.src_lang);
  Document tgt_doc(fs::path(tgt).stem().string(), read_file(tgt), config.tgt_lang);
  auto backend = make_backend(config.embed);
  auto alignment = align_documents(src_doc, tgt_doc, *backend, config.projection);

  auto range = [](const Range& r) {
    return std::to_string(r.begin) + "-" + std::to_string(r.end);
  };
  out << "doc_id\tsrc_range\ttgt_range\tscore\n";
  for (const auto& bead : alignment.beads) {
    out << src_doc.id() << '\t' << range(bead.src) << '\t' << range(bead.tgt) << '\t'
        << format_double(bead.score) << '\n';
  }
  if (!words) return kExitOk;

  out << "\ndoc_id\tbead\tsrc_token\tsrc_surface\ttgt_token\ttgt_surface\tscore\tdirection\n";
  for (size_t b = 0; b < alignment.beads.size(); ++b) {
    const Range& s = alignment.bead_src_tokens[b];
    const Range& t = alignment.bead_tgt_tokens[b];
    for (const auto& e : alignment.edges[b].edges) {
      out << src_doc.id() << '\t' << b << '\t' << s.begin + e.src << '\t'
          << alignment.src_tokens[s.begin + e.src].surface << '\t' << t.begin + e.tgt << '\t'
          << alignment.tgt_tokens[t.begin + e.tgt].surface << '\t' << format_double(e.score)
          << '\t' << direction_name(e.direction) << '\n';
    }
  }
  return kExitOk;
}

int cmd_serve_mock(const std::string& host, int port, size_t max_batch, int dim,
                   std::ostream& err) {
  MockBackend backend(dim);
  httplib::Server server;
  auto handler = [&](const httplib::Request& req, httplib::Response& res) {
    auto reply = handle_embed_request(backend, req.path, req.body, max_batch);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };
  server.Post("/v1/embed/sentences", handler);
  server.Post("/v1/embed/tokens", handler);
  err << "serving mock embeddings (dim " << dim << ") on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::kBackendUnavailable, "cannot listen on " + host);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual annotation projection for Brat corpora", "xlproj"};
  app.require_subcommand(1);
  CommonOptions common;
  std::function<int()> action;

  auto* project = app.add_subcommand("project", "Project source annotations onto target texts");
  std::string src, tgt, out_dir, report;
  project->add_option("--src", src, "Source corpus directory (.txt + .ann)")->required();
  project->add_option("--tgt-text", tgt, "Target text directory (.txt)")->required();
  project->add_option("--out", out_dir, "Output corpus directory")->required();
  project->add_option("--report", report, "Review report TSV")->required();
  add_common(project, common);
  project->callback([&] { action = [&] { return cmd_project(common, src, tgt, out_dir, report, err); }; });

  auto* audit = app.add_subcommand("audit", "Re-audit a report and tag the corpus");
  std::string corpus_dir;
  audit->add_option("--corpus", corpus_dir, "Projected corpus directory")->required();
  audit->add_option("--report", report, "Review report TSV (rewritten)")->required();
  add_common(audit, common);
  audit->callback([&] { action = [&] { return cmd_audit(common, corpus_dir, report, err); }; });

  auto* evaluate = app.add_subcommand("evaluate", "Score a system corpus against gold");
  std::string gold, system, metrics_out, per_doc;
  bool strict_only = false, relaxed_only = false, label_insensitive = false;
  evaluate->add_option("--gold", gold, "Gold corpus directory")->required();
  evaluate->add_option("--system", system, "System corpus directory")->required();
  evaluate->add_option("--out", metrics_out, "Metrics JSON file")->required();
  evaluate->add_option("--per-doc", per_doc, "Per-document TSV (default <out>.docs.tsv)");
  auto* strict_flag = evaluate->add_flag("--strict-only", strict_only, "Only strict scores");
  evaluate->add_flag("--relaxed-only", relaxed_only, "Only relaxed scores")->excludes(strict_flag);
  evaluate->add_flag("--label-insensitive", label_insensitive, "Ignore labels when matching");
  add_common(evaluate, common);
  evaluate->callback([&] {
    auto mode = strict_only    ? MetricsMode::kStrictOnly
                : relaxed_only ? MetricsMode::kRelaxedOnly
                               : MetricsMode::kBoth;
    action = [&, mode] {
      return cmd_evaluate(common, gold, system, metrics_out, per_doc, mode, label_insensitive,
                          err);
    };
  });

  auto* stats = app.add_subcommand("stats", "Concept frequency table");
  std::string scheme, descriptions;
  size_t top = 0;
  stats->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  stats->add_option("--scheme", scheme, "Terminology scheme, e.g. ICD-O")->required();
  stats->add_option("--top", top, "Number of rows")->required()->check(CLI::PositiveNumber);
  stats->add_option("--descriptions", descriptions, "code<TAB>description file")
      ->check(CLI::ExistingFile);
  add_common(stats, common);
  stats->callback([&] {
    action = [&] { return cmd_stats(common, corpus_dir, scheme, top, descriptions, out, err); };
  });

  auto* enrich = app.add_subcommand("enrich", "Add mapped codes to a corpus");
  std::string map;
  enrich->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  enrich->add_option("--map", map, "Mapping TSV")->required();
  enrich->add_option("--out", out_dir, "Output corpus directory")->required();
  add_common(enrich, common);
  enrich->callback([&] { action = [&] { return cmd_enrich(common, corpus_dir, map, out_dir, err); }; });

  auto* align = app.add_subcommand("align-debug", "Print sentence beads and word edges");
  bool words = false;
  align->add_option("--src", src, "Source text file")->required();
  align->add_option("--tgt", tgt, "Target text file")->required();
  align->add_flag("--words", words, "Also print word edges");
  add_common(align, common);
  align->callback([&] { action = [&] { return cmd_align_debug(common, src, tgt, words, out); }; });

  auto* serve = app.add_subcommand("serve-mock", "Serve mock embeddings over HTTP");
  std::string host = "127.0.0.1";
  int port = 8080;
  size_t max_batch = 256;
  int dim = 256;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--max-batch", max_batch, "Largest accepted batch")->check(CLI::PositiveNumber);
  serve->add_option("--dim", dim, "Vector dimension")->check(CLI::PositiveNumber);
  serve->callback([&] { action = [&] { return cmd_serve_mock(host, port, max_batch, dim, err); }; });

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("xlproj");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.message() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace xlproj
