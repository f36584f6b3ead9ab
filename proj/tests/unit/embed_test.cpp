#include <doctest.h>

#include <atomic>
#include <chrono>
#include <functional>
#include <thread>

#include <json.hpp>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "../test_support.hpp"
#include "xlproj/embed.hpp"
#include "xlproj/error.hpp"

#include <httplib.h>

using namespace xlproj;

namespace {

double cosine(std::string_view a, std::string_view b) {
  return mock_embedding(a, 256).dot(mock_embedding(b, 256));
}

// In-process embedding server on an ephemeral port. `hook` may replace the
// reply; it runs before the protocol handler.
class TestServer {
 public:
  using Hook = std::function<bool(const httplib::Request&, httplib::Response&)>;

  explicit TestServer(size_t max_batch = 256, Hook hook = {})
      : backend_(256), hook_(std::move(hook)) {
    auto handler = [this, max_batch](const httplib::Request& req, httplib::Response& res) {
      int now = ++active_;
      int seen = peak_.load();
      while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
      }
      ++requests_;
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
      if (!hook_ || !hook_(req, res)) {
        auto reply = handle_embed_request(backend_, req.path, req.body, max_batch);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
      }
      --active_;
    };
    server_.Post("/v1/embed/sentences", handler);
    server_.Post("/v1/embed/tokens", handler);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int peak() const { return peak_.load(); }
  int requests() const { return requests_.load(); }

 private:
  MockBackend backend_;
  Hook hook_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
  std::atomic<int> requests_{0};
};

EmbedConfig http_config(const std::string& endpoint, size_t batch = 64, size_t concurrent = 1) {
  EmbedConfig c;
  c.backend = EmbedConfig::Backend::kHttp;
  c.endpoint = endpoint;
  c.batch_size = batch;
  c.max_concurrent_batches = concurrent;
  return c;
}

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("#tu") == 14774826139049288293ull);
}

// Expected values come from tests/oracles/mock_embed_oracle.py.
TEST_CASE("mock cosines match the reference implementation") {
  CHECK(cosine("métastases", "metastasis") == doctest::Approx(0.750000000000).epsilon(1e-12));
  CHECK(cosine("métastases", "fièvre") == doctest::Approx(0.235702260396).epsilon(1e-11));
  CHECK(cosine("metástasis", "métastases") == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(cosine("metástasis", "hépatiques") == doctest::Approx(0.0));
  CHECK(cosine("hepáticas", "hépatiques") == doctest::Approx(0.527046276695).epsilon(1e-11));
  CHECK(cosine("Paciente con metástasis hepáticas.", "Patient avec métastases hépatiques.") ==
        doctest::Approx(0.608033510325768).epsilon(1e-12));
  CHECK(cosine("  MÉTASTASES\t hépatiques ", "métastases hépatiques") ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine("métastases", "metastasis") > cosine("métastases", "fièvre"));
}

TEST_CASE("mock vector of 'tumeur'") {
  auto v = mock_embedding("tumeur", 256);
  const double w = 0.408248290464;
  for (int i = 0; i < 256; ++i) {
    double expected = 0;
    if (i == 50 || i == 94 || i == 95 || i == 243) expected = -w;
    if (i == 107 || i == 163) expected = w;
    CHECK(v[i] == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("mock backend contract") {
  MockBackend mock(256);
  std::vector<std::string> twice = {"tumeur", "tumeur"};
  auto m = mock.embed_sentences(twice);
  CHECK(m.rows() == 2);
  CHECK(m.row(0) == m.row(1));
  CHECK(m.row(0).dot(m.row(1)) == doctest::Approx(1.0));
  CHECK(mock.embed_sentences(std::vector<std::string>{}).rows() == 0);

  std::vector<std::vector<std::string>> sents = {{"a", "b"}, {"x", "a"}};
  auto t = mock.embed_tokens(sents);
  REQUIRE(t.size() == 2);
  CHECK(t[0].rows() == 2);
  for (Eigen::Index r = 0; r < 2; ++r) CHECK(t[0].row(r).norm() == doctest::Approx(1.0));
  CHECK(t[0].row(0) == t[1].row(1));

  CHECK(error_of([&] { mock.embed_sentences(std::vector<std::string>{""}); }) ==
        ErrorCode::kProtocol);
  CHECK_THROWS_AS(MockBackend(0), Error);
}

TEST_CASE("unit norm and cardinality over random inputs") {
  testing::Rng rng(23);
  MockBackend mock(64);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<std::vector<std::string>> sents(testing::uniform(rng, 0, 5));
    for (auto& s : sents) {
      for (size_t k = testing::uniform(rng, 0, 6); k > 0; --k) {
        s.push_back(testing::pick(rng, testing::clinical_words()));
      }
    }
    auto out = mock.embed_tokens(sents);
    REQUIRE(out.size() == sents.size());
    for (size_t i = 0; i < sents.size(); ++i) {
      CHECK(static_cast<size_t>(out[i].rows()) == sents[i].size());
      for (Eigen::Index r = 0; r < out[i].rows(); ++r) {
        CHECK(out[i].row(r).norm() == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
  // Only punctuation or whitespace still yields a unit vector.
  CHECK(mock_embedding(" ", 16).norm() == doctest::Approx(1.0));
}

TEST_CASE("protocol handler") {
  MockBackend mock(8);
  auto r = handle_embed_request(mock, "/v1/embed/sentences", R"({"sentences":[]})", 4);
  CHECK(r.status == 200);
  CHECK(r.body == R"({"dim":8,"vectors":[]})");

  r = handle_embed_request(mock, "/v1/embed/tokens",
                           R"({"sentences":[{"tokens":["tumeur"]},{"tokens":[]}]})", 4);
  CHECK(r.status == 200);
  auto body = nlohmann::json::parse(r.body);
  CHECK(body["vectors"].size() == 2);
  CHECK(body["vectors"][0].size() == 1);
  CHECK(body["vectors"][1].size() == 0);

  CHECK(handle_embed_request(mock, "/v1/embed/sentences", "not json", 4).status == 400);
  CHECK(handle_embed_request(mock, "/v1/embed/sentences", R"({"sentences":[1]})", 4).status ==
        400);
  CHECK(handle_embed_request(mock, "/v1/embed/sentences", R"({"sentences":[""]})", 4).status ==
        400);
  CHECK(handle_embed_request(mock, "/v1/embed/tokens", R"({"sentences":["x"]})", 4).status ==
        400);
  CHECK(handle_embed_request(mock, "/v1/embed/sentences", R"({"sentences":["a","b","c"]})", 2)
            .status == 413);
  CHECK(handle_embed_request(mock, "/v1/other", R"({"sentences":[]})", 4).status == 404);
}

TEST_CASE("HTTP backend matches the mock") {
  TestServer server;
  HttpBackend http(http_config(server.endpoint(), 3, 2));
  MockBackend mock(256);
  std::vector<std::string> texts = {"tumeur", "métastases hépatiques", "fièvre", "a", "l'œdème",
                                    "x", "carcinome"};
  auto got = http.embed_sentences(texts);
  CHECK(http.dim() == 256);
  CHECK((got - mock.embed_sentences(texts)).cwiseAbs().maxCoeff() < 1e-14);

  std::vector<std::vector<std::string>> sents = {{"a", "b"}, {}, {"métastases"}, {"x", "y", "z"}};
  auto tok = http.embed_tokens(sents);
  auto ref = mock.embed_tokens(sents);
  REQUIRE(tok.size() == ref.size());
  for (size_t i = 0; i < tok.size(); ++i) {
    REQUIRE(tok[i].rows() == ref[i].rows());
    if (tok[i].rows() > 0) CHECK((tok[i] - ref[i]).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK(http.embed_sentences(std::vector<std::string>{}).rows() == 0);
}

TEST_CASE("HTTP backend bounds requests in flight") {
  TestServer server;
  std::vector<std::string> texts(40, "tumeur");
  HttpBackend two(http_config(server.endpoint(), 2, 2));
  two.embed_sentences(texts);
  CHECK(server.requests() == 20);
  CHECK(server.peak() <= 2);

  TestServer serial;
  HttpBackend one(http_config(serial.endpoint(), 4, 1));
  one.embed_sentences(texts);
  CHECK(serial.peak() == 1);
}

TEST_CASE("HTTP error mapping") {
  SUBCASE("413") {
    TestServer server(2);
    HttpBackend http(http_config(server.endpoint(), 5));
    CHECK(error_of([&] { http.embed_sentences(std::vector<std::string>{"a", "b", "c"}); }) ==
          ErrorCode::kBatchTooLarge);
  }
  SUBCASE("503") {
    TestServer server(8, [](const httplib::Request&, httplib::Response& res) {
      res.status = 503;
      res.set_content(R"({"error":"loading"})", "application/json");
      return true;
    });
    HttpBackend http(http_config(server.endpoint()));
    CHECK(error_of([&] { http.embed_sentences(std::vector<std::string>{"a"}); }) ==
          ErrorCode::kBackendUnavailable);
  }
  SUBCASE("400 and malformed bodies") {
    TestServer server(8, [](const httplib::Request& req, httplib::Response& res) {
      if (req.body.find("bad") != std::string::npos) {
        res.status = 400;
      } else if (req.body.find("short") != std::string::npos) {
        res.status = 200;
        res.set_content(R"({"dim":2,"vectors":[]})", "application/json");
      } else {
        res.status = 200;
        res.set_content("{", "application/json");
      }
      return true;
    });
    HttpBackend http(http_config(server.endpoint()));
    CHECK(error_of([&] { http.embed_sentences(std::vector<std::string>{"bad"}); }) ==
          ErrorCode::kProtocol);
    CHECK(error_of([&] { http.embed_sentences(std::vector<std::string>{"short"}); }) ==
          ErrorCode::kProtocol);
    CHECK(error_of([&] { http.embed_sentences(std::vector<std::string>{"x"}); }) ==
          ErrorCode::kProtocol);
    std::vector<std::vector<std::string>> sents = {{"short"}};
    CHECK(error_of([&] { http.embed_tokens(sents); }) == ErrorCode::kProtocol);
  }
  SUBCASE("dimension change") {
    std::atomic<int> calls{0};
    TestServer server(8, [&](const httplib::Request&, httplib::Response& res) {
      int d = ++calls == 1 ? 2 : 3;
      std::string row = d == 2 ? "[1,0]" : "[1,0,0]";
      res.status = 200;
      res.set_content(R"({"dim":)" + std::to_string(d) + R"(,"vectors":[)" + row + "]}",
                      "application/json");
      return true;
    });
    HttpBackend http(http_config(server.endpoint()));
    http.embed_sentences(std::vector<std::string>{"a"});
    CHECK(error_of([&] { http.embed_sentences(std::vector<std::string>{"a"}); }) ==
          ErrorCode::kProtocol);
  }
  SUBCASE("no server") {
    // A port that was free a moment ago and has no listener now.
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ::close(fd);
    int port = ntohs(addr.sin_port);
    HttpBackend http(http_config("http://127.0.0.1:" + std::to_string(port)));
    CHECK(error_of([&] { http.embed_sentences(std::vector<std::string>{"a"}); }) ==
          ErrorCode::kBackendUnavailable);
  }
}

TEST_CASE("config validation") {
  EmbedConfig c;
  CHECK_NOTHROW(c.validate());
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = EmbedConfig{};
  c.backend = EmbedConfig::Backend::kHttp;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(dynamic_cast<MockBackend*>(make_backend(EmbedConfig{}).get()) != nullptr);
}

}
