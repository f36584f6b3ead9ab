#ifndef XLPROJ_EMBED_HPP_
#define XLPROJ_EMBED_HPP_

#include <atomic>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

// Sentence and token embeddings behind one provider contract. Backends return
// one unit-norm row per input item.
namespace xlproj {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using EmbeddingMatrix = RowMatrix<double>;

struct EmbedConfig {
  enum class Backend { kMock, kHttp };
  Backend backend = Backend::kMock;
  std::string endpoint;  // e.g. "http://localhost:8080"; http only
  size_t batch_size = 64;
  size_t max_concurrent_batches = 1;
  int mock_dim = 256;

  void validate() const;  // throws Error(kConfig)
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  // Vector dimension; 0 while an HTTP backend has not seen a response yet.
  virtual int dim() const = 0;
  // One row per text, in input order.
  virtual EmbeddingMatrix embed_sentences(std::span<const std::string> texts) = 0;
  // One matrix per sentence with one row per token.
  virtual std::vector<EmbeddingMatrix> embed_tokens(
      std::span<const std::vector<std::string>> sentences) = 0;
};

// Signed feature hash of character trigrams (64-bit FNV-1a over the UTF-8
// bytes of each trigram; low bit gives the sign, the remaining bits mod dim
// the bucket) of the case- and diacritic-folded, whitespace-collapsed text
// padded with '#' on both sides, L2-normalized.
Eigen::VectorXd mock_embedding(std::string_view text, int dim);

uint64_t fnv1a64(std::string_view bytes);

// Context-free and deterministic, so equal strings always embed identically.
class MockBackend final : public EmbeddingBackend {
 public:
  explicit MockBackend(int dim = 256);

  int dim() const override { return dim_; }
  EmbeddingMatrix embed_sentences(std::span<const std::string> texts) override;
  std::vector<EmbeddingMatrix> embed_tokens(
      std::span<const std::vector<std::string>> sentences) override;

 private:
  int dim_;
};

// Client for the JSON embedding protocol:
//   POST /v1/embed/sentences {"sentences":[s...]} -> {"dim":D,"vectors":[[...]...]}
//   POST /v1/embed/tokens {"sentences":[{"tokens":[t...]}...]}
//        -> {"dim":D,"vectors":[[[...]...]...]}
// 413 maps to kBatchTooLarge, 503 and connection failures to
// kBackendUnavailable, anything else unexpected to kProtocol.
class HttpBackend final : public EmbeddingBackend {
 public:
  explicit HttpBackend(const EmbedConfig& config);

  int dim() const override { return dim_.load(); }
  EmbeddingMatrix embed_sentences(std::span<const std::string> texts) override;
  std::vector<EmbeddingMatrix> embed_tokens(
      std::span<const std::vector<std::string>> sentences) override;

 private:
  std::string post(const std::string& path, const std::string& body);
  void check_dim(int dim);

  EmbedConfig config_;
  std::atomic<int> dim_{0};
  std::counting_semaphore<> in_flight_;
};

std::unique_ptr<EmbeddingBackend> make_backend(const EmbedConfig& config);

// Server side of the protocol, independent of any HTTP library: maps a
// request path and body to a status code and JSON body using `backend`.
struct ProtocolResponse {
  int status = 200;
  std::string body;
};

ProtocolResponse handle_embed_request(EmbeddingBackend& backend, std::string_view path,
                                      std::string_view body, size_t max_batch);

}  // namespace xlproj

#endif  // XLPROJ_EMBED_HPP_
