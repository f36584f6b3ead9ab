#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <random>

#include "../test_support.hpp"
#include "xlproj/error.hpp"
#include "xlproj/fsutil.hpp"
#include "xlproj/standoff.hpp"

using namespace xlproj;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("xlproj_standoff_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

// Independent count of T-lines, the way a shell one-liner would do it.
size_t count_t_lines(const fs::path& dir) {
  size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".ann") continue;
    std::ifstream in(e.path());
    std::string line;
    while (std::getline(in, line)) n += !line.empty() && line[0] == 'T';
  }
  return n;
}

const Document kDoc("d1", "Présence de métastases hépatiques multiples.", "fr");

}  // namespace

TEST_SUITE("standoff") {

TEST_CASE("T-line with a bare note") {
  auto file = parse_ann("T1\tMORFOLOGIA_NEOPLASIA 12 22\tmétastases\n#1\tAnnotatorNotes T1\t8000/6",
                        kDoc);
  REQUIRE(file.annotations.size() == 1);
  const auto& a = file.annotations[0];
  CHECK(a.label == "MORFOLOGIA_NEOPLASIA");
  CHECK(a.start == 12);
  CHECK(a.end == 22);
  CHECK(a.surface == "métastases");
  REQUIRE(a.codes.size() == 1);
  CHECK(a.codes[0] == Code{"ICD-O", "8000/6"});
  CHECK(file.opaque_lines.empty());
}

TEST_CASE("empty input") {
  CHECK(parse_ann("", kDoc).annotations.empty());
  CHECK(serialize_ann({}).empty());
}

TEST_CASE("scheme prefixes and the configured default") {
  auto text = "T1\tX 12 22\tmétastases\n#1\tAnnotatorNotes T1\tSNOMED-CT:14799000\n"
              "#2\tAnnotatorNotes T1\t8000/6\n";
  auto file = parse_ann(text, kDoc, {.default_scheme = "CIE-O"});
  REQUIRE(file.annotations[0].codes.size() == 2);
  CHECK(file.annotations[0].codes[0] == Code{"SNOMED-CT", "14799000"});
  CHECK(file.annotations[0].codes[1] == Code{"CIE-O", "8000/6"});
}

TEST_CASE("one annotation with two codes gives one T-line and two notes") {
  auto a = testing::make_annotation(kDoc, "T1", "MORFOLOGIA_NEOPLASIA", 12, 33,
                                    {{"ICD-O", "8000/6"}, {"SNOMED-CT", "14799000"}});
  CHECK(serialize_ann(std::vector{a}) ==
        "T1\tMORFOLOGIA_NEOPLASIA 12 33\tmétastases hépatiques\n"
        "#1\tAnnotatorNotes T1\t8000/6\n"
        "#2\tAnnotatorNotes T1\tSNOMED-CT:14799000\n");
}

TEST_CASE("canonical order sorts by span then numeric id") {
  std::vector<Annotation> anns = {
      testing::make_annotation(kDoc, "T10", "A", 12, 22),
      testing::make_annotation(kDoc, "T2", "A", 12, 22),
      testing::make_annotation(kDoc, "T3", "A", 0, 8),
  };
  auto text = serialize_ann(anns);
  CHECK(text == "T3\tA 0 8\tPrésence\nT2\tA 12 22\tmétastases\nT10\tA 12 22\tmétastases\n");
}

TEST_CASE("three annotations, one note: parse, serialize, parse") {
  auto text = "T2\tA 23 33\thépatiques\nT1\tA 12 22\tmétastases\nT3\tB 0 8\tPrésence\n"
              "#1\tAnnotatorNotes T1\t8000/6\n";
  auto first = parse_ann(text, kDoc);
  auto second = parse_ann(serialize_ann(first.annotations), kDoc);
  sort_canonical(first.annotations);
  CHECK(first.annotations == second.annotations);
}

TEST_CASE("opaque lines survive") {
  auto text = "T1\tA 12 22\tmétastases\nT2\tA 23 33\thépatiques\n"
              "R1\tRel Arg1:T1 Arg2:T2\nA1\tNegated T1\n#9\tAnnotatorNotes R1\tnote\n";
  auto file = parse_ann(text, kDoc);
  CHECK(file.opaque_lines.size() == 3);
  CHECK(serialize_ann(file.annotations, file.opaque_lines) == text);
}

TEST_CASE("discontinuous spans become their covering span") {
  auto file = parse_ann("T1\tA 12 22;23 33\tmétastases hépatiques\n", kDoc);
  REQUIRE(file.annotations.size() == 1);
  CHECK(file.annotations[0].discontinuous);
  CHECK(file.annotations[0].start == 12);
  CHECK(file.annotations[0].end == 33);
}

TEST_CASE("parse errors") {
  auto code_of = [](const std::string& text) {
    try {
      parse_ann(text, kDoc);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error");
    return ErrorCode::kIo;
  };
  CHECK(code_of("T1 A 0 8 Présence\n") == ErrorCode::kMalformedLine);
  CHECK(code_of("T1\tA zero 8\tPrésence\n") == ErrorCode::kMalformedLine);
  CHECK(code_of("T1\tA 0 99\tPrésence\n") == ErrorCode::kOffsetOutOfRange);
  CHECK(code_of("T1\tA 8 8\t\n") == ErrorCode::kOffsetOutOfRange);
  CHECK(code_of("T1\tA 0 8\tPresence\n") == ErrorCode::kSurfaceMismatch);
  CHECK(code_of("T1\tA 0 8\tPrésence\n#1\tAnnotatorNotes T7\t8000/6\n") ==
        ErrorCode::kDanglingNote);
  CHECK(code_of("T1\tA 0 8\tPrésence\nT1\tA 0 8\tPrésence\n") == ErrorCode::kMalformedLine);
}

TEST_CASE("serialize rejects invalid annotations") {
  auto a = testing::make_annotation(kDoc, "T1", "A", 0, 8);
  auto bad_label = a;
  bad_label.label = "two words";
  CHECK_THROWS_AS(serialize_ann(std::vector{bad_label}), Error);
  auto empty = a;
  empty.end = empty.start;
  CHECK_THROWS_AS(serialize_ann(std::vector{empty}), Error);
  CHECK_THROWS_AS(serialize_ann(std::vector{a, a}), Error);
}

TEST_CASE("multi-line surfaces are flattened on emit and accepted on parse") {
  Document doc("d", "tumeur\nmaligne", "fr");
  auto a = testing::make_annotation(doc, "T1", "A", 0, 14);
  auto text = serialize_ann(std::vector{a});
  CHECK(text == "T1\tA 0 14\ttumeur maligne\n");
  auto back = parse_ann(text, doc);
  CHECK(back.annotations[0] == a);
}

TEST_CASE("round-trip over generated documents") {
  testing::Rng rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    Document doc("g", testing::random_text(rng, testing::uniform(rng, 1, 30)), "fr");
    auto anns = testing::random_annotations(rng, doc, testing::uniform(rng, 0, 8));
    std::vector<std::string> opaque;
    if (testing::coin(rng)) opaque.push_back("R1\tRel Arg1:T1 Arg2:T2");
    auto text = serialize_ann(anns, opaque);
    auto back = parse_ann(text, doc);
    CHECK(back.annotations == anns);
    CHECK(back.opaque_lines == opaque);
    CHECK(serialize_ann(back.annotations, back.opaque_lines) == text);
  }
}

TEST_CASE("load_corpus") {
  TempDir dir;
  SUBCASE("empty directory") { CHECK(load_corpus(dir.path, "fr").entries.empty()); }
  SUBCASE("text without annotations") {
    write(dir.path / "a.txt", "tumeur");
    auto c = load_corpus(dir.path, "fr");
    REQUIRE(c.entries.size() == 1);
    CHECK(c.entries[0].annotations.empty());
  }
  SUBCASE("annotation count matches a line count") {
    testing::Rng rng(11);
    for (std::string id : {"c", "a", "b"}) {
      Document doc(id, testing::random_text(rng, 20), "fr");
      write(dir.path / (id + ".txt"), doc.text());
      write(dir.path / (id + ".ann"),
            serialize_ann(testing::random_annotations(rng, doc, testing::uniform(rng, 1, 6))));
    }
    auto c = load_corpus(dir.path, "fr");
    REQUIRE(c.entries.size() == 3);
    CHECK(c.entries[0].document.id() == "a");
    CHECK(c.entries[2].document.id() == "c");
    CHECK(c.annotation_count() == count_t_lines(dir.path));
    CHECK(c.find("b") != nullptr);
    CHECK(c.find("z") == nullptr);
    CHECK(validate(c).empty());
  }
  SUBCASE("errors carry the document id") {
    write(dir.path / "bad.txt", "abc");
    write(dir.path / "bad.ann", "T1\tA 0 9\tabc\n");
    try {
      load_corpus(dir.path, "fr");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOffsetOutOfRange);
      CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }
  }
  SUBCASE("missing directory") {
    CHECK_THROWS_AS(load_corpus(dir.path / "nope", "fr"), Error);
  }
}

TEST_CASE("save then load is the identity") {
  TempDir dir;
  testing::Rng rng(5);
  Corpus c;
  for (std::string id : {"x1", "x2"}) {
    Document doc(id, testing::random_text(rng, 15), "fr");
    auto anns = testing::random_annotations(rng, doc, 4);
    c.entries.push_back({doc, anns, {}});
  }
  save_corpus(c, dir.path);
  auto back = load_corpus(dir.path, "fr");
  REQUIRE(back.entries.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(back.entries[i].document.text() == c.entries[i].document.text());
    CHECK(back.entries[i].annotations == c.entries[i].annotations);
  }
}

TEST_CASE("validate") {
  testing::Rng rng(3);
  Document doc("v", "Présence de métastases hépatiques.", "fr");
  Corpus c;
  c.entries.push_back({doc, testing::random_annotations(rng, doc, 5), {}});
  CHECK(validate(c).empty());

  SUBCASE("offset beyond the text") {
    c.entries[0].annotations[0].end = 999;
    auto v = validate(c);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::kOffsetOutOfRange);
    CHECK(v[0].doc_id == "v");
  }
  SUBCASE("one mutated surface gives exactly one mismatch") {
    c.entries[0].annotations[2].surface += "x";
    auto v = validate(c);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::kSurfaceMismatch);
    CHECK(v[0].ann_id == c.entries[0].annotations[2].id);
  }
  SUBCASE("duplicate id") {
    c.entries[0].annotations[1].id = c.entries[0].annotations[0].id;
    auto v = validate(c);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::kDuplicateId);
  }
}

TEST_CASE("atomic writes leave no temp files") {
  TempDir dir;
  write_file_atomic(dir.path / "out.txt", "one");
  write_file_atomic(dir.path / "out.txt", "two");
  CHECK(read_file(dir.path / "out.txt") == "two");
  size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++files;
  CHECK(files == 1);
}

}
