#include <doctest.h>

#include "../test_support.hpp"
#include "xlproj/enrich.hpp"
#include "xlproj/error.hpp"

using namespace xlproj;

namespace {

Corpus two_annotations() {
  Document doc("e", "métastases et carcinome", "fr");
  Corpus c;
  c.entries.push_back(
      {doc,
       {testing::make_annotation(doc, "T1", "M", 0, 10, {{"ICD-O", "A"}}),
        testing::make_annotation(doc, "T2", "M", 14, 23, {{"ICD-O", "A"}, {"CIE", "A"}})},
       {}});
  return c;
}

}  // namespace

TEST_SUITE("enrich") {

TEST_CASE("mapping files") {
  CHECK(parse_mapping("").size() == 0);

  auto one = parse_mapping("8000/6\t14799000\tNeoplasm, metastatic (morphologic abnormality)\n");
  CHECK(one.size() == 1);
  REQUIRE(one.entries.count("8000/6") == 1);
  CHECK(one.entries.at("8000/6")[0].code == "14799000");
  CHECK(one.descriptions().at("14799000") == "Neoplasm, metastatic (morphologic abnormality)");

  auto dup = parse_mapping("from_code\tto_code\tdescription\nA\tX\r\nA\tX\n\nA\tY\n");
  CHECK(dup.size() == 2);
  CHECK(dup.duplicate_rows == 1);
  CHECK(dup.entries.at("A")[1].code == "Y");
  CHECK(dup.entries.at("A")[1].description.empty());

  CHECK_THROWS_AS(parse_mapping("A\n"), Error);
  CHECK_THROWS_AS(parse_mapping("A\t\n"), Error);
  CHECK_THROWS_AS(parse_mapping("\tX\n"), Error);
  CHECK_THROWS_AS(load_mapping("/nonexistent/map.tsv"), Error);
}

TEST_CASE("one-to-many expansion") {
  auto map = parse_mapping("A\tX\nA\tY\n");
  auto before = two_annotations();
  auto result = enrich_corpus(before, map);
  CHECK(result.added_count == 4);
  CHECK(result.corpus.code_count() == before.code_count() + 4);
  const auto& t2 = result.corpus.entries[0].annotations[1];
  CHECK(t2.codes == std::vector<Code>{{"ICD-O", "A"}, {"CIE", "A"}, {"SNOMED-CT", "X"},
                                      {"SNOMED-CT", "Y"}});

  auto again = enrich_corpus(result.corpus, map);
  CHECK(again.added_count == 0);
  CHECK(again.corpus.entries[0].annotations == result.corpus.entries[0].annotations);

  auto unchanged = enrich_corpus(before, CodeMap{});
  CHECK(unchanged.added_count == 0);
  CHECK(unchanged.corpus.entries[0].annotations == before.entries[0].annotations);
}

TEST_CASE("additivity, idempotence, and non-destructiveness on random corpora") {
  testing::Rng rng(83);
  auto map = parse_mapping("8000/6\t14799000\n8000/6\t1240414004\n8500/3\t82711006\n"
                           "8140/3\t35917007\n9999/9\t1\n9999/9\t2\n9999/9\t3\n");
  for (int iter = 0; iter < 30; ++iter) {
    Corpus c;
    for (int d = 0; d < 4; ++d) {
      Document doc("d" + std::to_string(d), testing::random_text(rng, 15), "fr");
      c.entries.push_back({doc, testing::random_annotations(rng, doc, 5), {}});
    }
    auto once = enrich_corpus(c, map);
    CHECK(once.corpus.code_count() == c.code_count() + once.added_count);
    auto twice = enrich_corpus(once.corpus, map);
    CHECK(twice.added_count == 0);
    CHECK(validate(once.corpus).empty());
    for (size_t d = 0; d < c.entries.size(); ++d) {
      CHECK(once.corpus.entries[d].document.text() == c.entries[d].document.text());
      const auto& a = c.entries[d].annotations;
      const auto& b = once.corpus.entries[d].annotations;
      REQUIRE(a.size() == b.size());
      for (size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].start == b[k].start);
        CHECK(a[k].end == b[k].end);
        CHECK(std::equal(a[k].codes.begin(), a[k].codes.end(), b[k].codes.begin()));
      }
    }
  }
}

}
