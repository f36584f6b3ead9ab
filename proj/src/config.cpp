#include "xlproj/config.hpp"

#include <cstdlib>
#include <functional>
#include <map>

#include <json.hpp>

#include "xlproj/error.hpp"
#include "xlproj/fsutil.hpp"

namespace xlproj {
namespace {

using json = nlohmann::json;

template <typename T>
T get(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, "wrong type for '" + key + "'");
  }
}

size_t get_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorCode::kConfig, "'" + key + "' must be a non-negative integer");
  }
  return v.get<size_t>();
}

}  // namespace

void PipelineConfig::validate() const {
  embed.validate();
  projection.align.validate();
  audit.validate();
  if (standoff.default_scheme.empty() || scheme_from.empty() || scheme_to.empty()) {
    throw Error(ErrorCode::kConfig, "schemes must be non-empty");
  }
}

void apply_config(PipelineConfig& config, std::string_view json_text,
                  const std::filesystem::path& base_dir) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kConfig, "config must be a JSON object");
  }
  auto path = [&](const json& v, const std::string& key) {
    std::filesystem::path p = get<std::string>(v, key);
    return p.is_relative() ? base_dir / p : p;
  };

  using Setter = std::function<void(const json&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"embed.backend",
       [&](const json& v, const std::string& k) {
         auto name = get<std::string>(v, k);
         if (name == "mock") {
           config.embed.backend = EmbedConfig::Backend::kMock;
         } else if (name == "http") {
           config.embed.backend = EmbedConfig::Backend::kHttp;
         } else {
           throw Error(ErrorCode::kConfig, "embed.backend must be 'mock' or 'http'");
         }
       }},
      {"embed.endpoint",
       [&](const json& v, const std::string& k) { config.embed.endpoint = get<std::string>(v, k); }},
      {"embed.batch_size",
       [&](const json& v, const std::string& k) { config.embed.batch_size = get_count(v, k); }},
      {"embed.max_concurrent_batches",
       [&](const json& v, const std::string& k) {
         config.embed.max_concurrent_batches = get_count(v, k);
       }},
      {"embed.mock_dim",
       [&](const json& v, const std::string& k) {
         config.embed.mock_dim = static_cast<int>(get_count(v, k));
       }},
      {"align.max_bead",
       [&](const json& v, const std::string& k) {
         config.projection.align.max_bead = static_cast<int>(get_count(v, k));
       }},
      {"align.null_penalty",
       [&](const json& v, const std::string& k) {
         config.projection.align.null_penalty = get<double>(v, k);
       }},
      {"align.size_penalty",
       [&](const json& v, const std::string& k) {
         config.projection.align.size_penalty = get<double>(v, k);
       }},
      {"wordalign.min_score",
       [&](const json& v, const std::string& k) {
         config.projection.words.min_score = get<double>(v, k);
       }},
      {"segment.abbreviations",
       [&](const json& v, const std::string& k) {
         config.projection.abbreviations = Abbreviations::load(path(v, k));
       }},
      {"audit.stoplist",
       [&](const json& v, const std::string& k) { config.audit.stoplist = load_stoplist(path(v, k)); }},
      {"audit.min_target_len",
       [&](const json& v, const std::string& k) { config.audit.min_target_len = get_count(v, k); }},
      {"audit.inflation_abs",
       [&](const json& v, const std::string& k) { config.audit.inflation_abs = get_count(v, k); }},
      {"audit.inflation_ratio",
       [&](const json& v, const std::string& k) { config.audit.inflation_ratio = get<double>(v, k); }},
      {"eval.label_sensitive",
       [&](const json& v, const std::string& k) { config.label_sensitive = get<bool>(v, k); }},
      {"scheme.default",
       [&](const json& v, const std::string& k) {
         config.standoff.default_scheme = get<std::string>(v, k);
       }},
      {"scheme.from",
       [&](const json& v, const std::string& k) { config.scheme_from = get<std::string>(v, k); }},
      {"scheme.to",
       [&](const json& v, const std::string& k) { config.scheme_to = get<std::string>(v, k); }},
      {"lang.src",
       [&](const json& v, const std::string& k) { config.src_lang = get<std::string>(v, k); }},
      {"lang.tgt",
       [&](const json& v, const std::string& k) { config.tgt_lang = get<std::string>(v, k); }},
      {"jobs", [&](const json& v, const std::string& k) { config.jobs = get_count(v, k); }},
  };

  for (const auto& [key, value] : doc.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    it->second(value, key);
  }
  config.validate();
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig config;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.message());
  }
  apply_config(config, text, path.parent_path());
  return config;
}

void apply_environment(PipelineConfig& config) {
  if (const char* endpoint = std::getenv("XLPROJ_ENDPOINT"); endpoint && *endpoint) {
    config.embed.endpoint = endpoint;
  }
}

}  // namespace xlproj
