#include "xlproj/embed.hpp"

#include <algorithm>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "xlproj/error.hpp"
#include "xlproj/parallel.hpp"
#include "xlproj/unicode.hpp"

namespace xlproj {
namespace {

using json = nlohmann::json;

constexpr char kSentencesPath[] = "/v1/embed/sentences";
constexpr char kTokensPath[] = "/v1/embed/tokens";

void require_non_empty(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kProtocol, "empty input string");
}

EmbeddingMatrix rows_from_json(const json& rows, int dim) {
  if (!rows.is_array()) throw Error(ErrorCode::kProtocol, "vectors must be an array");
  EmbeddingMatrix m(static_cast<Eigen::Index>(rows.size()), dim);
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.size() != static_cast<size_t>(dim)) {
      throw Error(ErrorCode::kProtocol, "vector of wrong dimension");
    }
    for (int c = 0; c < dim; ++c) {
      if (!row[c].is_number()) throw Error(ErrorCode::kProtocol, "non-numeric component");
      m(static_cast<Eigen::Index>(r), c) = row[c].get<double>();
    }
    double norm = m.row(static_cast<Eigen::Index>(r)).norm();
    if (!(norm > 0) || !std::isfinite(norm)) {
      throw Error(ErrorCode::kProtocol, "zero or non-finite vector");
    }
    m.row(static_cast<Eigen::Index>(r)) /= norm;
  }
  return m;
}

json rows_to_json(const EmbeddingMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void EmbedConfig::validate() const {
  if (batch_size == 0) throw Error(ErrorCode::kConfig, "embed.batch_size must be > 0");
  if (max_concurrent_batches == 0) {
    throw Error(ErrorCode::kConfig, "embed.max_concurrent_batches must be >= 1");
  }
  if (mock_dim <= 0) throw Error(ErrorCode::kConfig, "embed.mock_dim must be > 0");
  if (backend == Backend::kHttp && endpoint.empty()) {
    throw Error(ErrorCode::kConfig, "embed.endpoint is required for the http backend");
  }
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

Eigen::VectorXd mock_embedding(std::string_view text, int dim) {
  auto folded = unicode::fold(unicode::decode_utf8(text));
  std::u32string padded = U"#";
  bool pending_space = false;
  for (char32_t c : folded) {
    if (unicode::is_space(c)) {
      pending_space = padded.size() > 1;
      continue;
    }
    if (pending_space) padded.push_back(U' ');
    pending_space = false;
    padded.push_back(c);
  }
  padded.push_back(U'#');

  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    uint64_t h = fnv1a64(unicode::encode_utf8(std::u32string_view(padded).substr(i, 3)));
    v[static_cast<Eigen::Index>((h >> 1) % static_cast<uint64_t>(dim))] += (h & 1) ? -1.0 : 1.0;
  }
  double norm = v.norm();
  if (norm == 0.0) {
    // Only reachable when every trigram cancels; keep the unit-norm contract.
    v[0] = 1.0;
    return v;
  }
  return v / norm;
}

MockBackend::MockBackend(int dim) : dim_(dim) {
  if (dim <= 0) throw Error(ErrorCode::kConfig, "mock dimension must be > 0");
}

EmbeddingMatrix MockBackend::embed_sentences(std::span<const std::string> texts) {
  EmbeddingMatrix m(static_cast<Eigen::Index>(texts.size()), dim_);
  for (size_t i = 0; i < texts.size(); ++i) {
    require_non_empty(texts[i]);
    m.row(static_cast<Eigen::Index>(i)) = mock_embedding(texts[i], dim_).transpose();
  }
  return m;
}

std::vector<EmbeddingMatrix> MockBackend::embed_tokens(
    std::span<const std::vector<std::string>> sentences) {
  std::vector<EmbeddingMatrix> out;
  out.reserve(sentences.size());
  for (const auto& tokens : sentences) out.push_back(embed_sentences(tokens));
  return out;
}

HttpBackend::HttpBackend(const EmbedConfig& config)
    : config_(config),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<size_t>(1, config.max_concurrent_batches))) {
  config_.validate();
}

void HttpBackend::check_dim(int dim) {
  if (dim <= 0) throw Error(ErrorCode::kProtocol, "response dim must be positive");
  int expected = 0;
  if (!dim_.compare_exchange_strong(expected, dim) && expected != dim) {
    throw Error(ErrorCode::kProtocol, "dimension changed from " + std::to_string(expected) +
                                          " to " + std::to_string(dim));
  }
}

std::string HttpBackend::post(const std::string& path, const std::string& body) {
  in_flight_.acquire();
  httplib::Result res;
  try {
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(5);
    client.set_read_timeout(300);
    res = client.Post(path, body, "application/json");
  } catch (...) {
    in_flight_.release();
    throw;
  }
  in_flight_.release();
  if (!res) {
    throw Error(ErrorCode::kBackendUnavailable,
                config_.endpoint + path + ": " + httplib::to_string(res.error()));
  }
  switch (res->status) {
    case 200: return res->body;
    case 413: throw Error(ErrorCode::kBatchTooLarge, config_.endpoint + path);
    case 503: throw Error(ErrorCode::kBackendUnavailable, config_.endpoint + path + ": 503");
    default:
      throw Error(ErrorCode::kProtocol,
                  config_.endpoint + path + ": HTTP " + std::to_string(res->status));
  }
}

EmbeddingMatrix HttpBackend::embed_sentences(std::span<const std::string> texts) {
  for (const auto& t : texts) require_non_empty(t);
  if (texts.empty()) return EmbeddingMatrix(0, dim());
  size_t batches = (texts.size() + config_.batch_size - 1) / config_.batch_size;
  std::vector<EmbeddingMatrix> parts(batches);
  parallel_for(batches, config_.max_concurrent_batches, [&](size_t b) {
    auto first = texts.begin() + static_cast<std::ptrdiff_t>(b * config_.batch_size);
    auto last = texts.begin() + static_cast<std::ptrdiff_t>(
                                    std::min(texts.size(), (b + 1) * config_.batch_size));
    json request = {{"sentences", json(std::vector<std::string>(first, last))}};
    json response;
    try {
      response = json::parse(post(kSentencesPath, request.dump()));
      int dim = response.at("dim").get<int>();
      check_dim(dim);
      parts[b] = rows_from_json(response.at("vectors"), dim);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kProtocol, std::string("bad response: ") + e.what());
    }
    if (parts[b].rows() != last - first) {
      throw Error(ErrorCode::kProtocol, "response vector count differs from request");
    }
  });
  EmbeddingMatrix out(static_cast<Eigen::Index>(texts.size()), dim());
  Eigen::Index row = 0;
  for (const auto& p : parts) {
    out.middleRows(row, p.rows()) = p;
    row += p.rows();
  }
  return out;
}

std::vector<EmbeddingMatrix> HttpBackend::embed_tokens(
    std::span<const std::vector<std::string>> sentences) {
  for (const auto& s : sentences) {
    for (const auto& t : s) require_non_empty(t);
  }
  std::vector<EmbeddingMatrix> out(sentences.size());
  if (sentences.empty()) return out;
  size_t batches = (sentences.size() + config_.batch_size - 1) / config_.batch_size;
  parallel_for(batches, config_.max_concurrent_batches, [&](size_t b) {
    size_t first = b * config_.batch_size;
    size_t last = std::min(sentences.size(), first + config_.batch_size);
    json items = json::array();
    for (size_t i = first; i < last; ++i) items.push_back({{"tokens", sentences[i]}});
    try {
      json response = json::parse(post(kTokensPath, json{{"sentences", items}}.dump()));
      int dim = response.at("dim").get<int>();
      check_dim(dim);
      const auto& vectors = response.at("vectors");
      if (!vectors.is_array() || vectors.size() != last - first) {
        throw Error(ErrorCode::kProtocol, "response sentence count differs from request");
      }
      for (size_t i = first; i < last; ++i) {
        out[i] = rows_from_json(vectors[i - first], dim);
        if (static_cast<size_t>(out[i].rows()) != sentences[i].size()) {
          throw Error(ErrorCode::kProtocol, "response token count differs from request");
        }
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kProtocol, std::string("bad response: ") + e.what());
    }
  });
  return out;
}

std::unique_ptr<EmbeddingBackend> make_backend(const EmbedConfig& config) {
  config.validate();
  if (config.backend == EmbedConfig::Backend::kHttp) return std::make_unique<HttpBackend>(config);
  return std::make_unique<MockBackend>(config.mock_dim);
}

ProtocolResponse handle_embed_request(EmbeddingBackend& backend, std::string_view path,
                                      std::string_view body, size_t max_batch) {
  auto error = [](int status, std::string_view message) {
    return ProtocolResponse{status, json{{"error", message}}.dump()};
  };
  json request = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (request.is_discarded() || !request.is_object() || !request.contains("sentences") ||
      !request["sentences"].is_array()) {
    return error(400, "malformed request");
  }
  const auto& items = request["sentences"];
  if (items.size() > max_batch) return error(413, "batch too large");
  try {
    if (path == kSentencesPath) {
      std::vector<std::string> texts;
      for (const auto& s : items) {
        if (!s.is_string() || s.get_ref<const std::string&>().empty()) {
          return error(400, "sentences must be non-empty strings");
        }
        texts.push_back(s.get<std::string>());
      }
      auto m = backend.embed_sentences(texts);
      return {200, json{{"dim", backend.dim()}, {"vectors", rows_to_json(m)}}.dump()};
    }
    if (path == kTokensPath) {
      std::vector<std::vector<std::string>> sentences;
      for (const auto& s : items) {
        if (!s.is_object() || !s.contains("tokens") || !s["tokens"].is_array()) {
          return error(400, "each sentence needs a tokens array");
        }
        auto& tokens = sentences.emplace_back();
        for (const auto& t : s["tokens"]) {
          if (!t.is_string() || t.get_ref<const std::string&>().empty()) {
            return error(400, "tokens must be non-empty strings");
          }
          tokens.push_back(t.get<std::string>());
        }
      }
      json vectors = json::array();
      for (const auto& m : backend.embed_tokens(sentences)) vectors.push_back(rows_to_json(m));
      return {200, json{{"dim", backend.dim()}, {"vectors", vectors}}.dump()};
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBackendUnavailable) return error(503, e.message());
    return error(400, e.message());
  }
  return error(404, "unknown path");
}

}  // namespace xlproj
