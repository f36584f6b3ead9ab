#ifndef XLPROJ_ENRICH_HPP_
#define XLPROJ_ENRICH_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xlproj/standoff.hpp"

// Adds mapped terminology codes (e.g. ICD-O -> SNOMED-CT) to annotations.
namespace xlproj {

struct MappedCode {
  std::string code;
  std::string description;  // may be empty
};

struct CodeMap {
  std::string scheme_from = "ICD-O";
  std::string scheme_to = "SNOMED-CT";
  // Targets per source code, in mapping-file order.
  std::map<std::string, std::vector<MappedCode>> entries;
  size_t duplicate_rows = 0;

  // Number of distinct (from, to) pairs.
  size_t size() const;
  // Target-code descriptions, for the stats table.
  std::map<std::string, std::string> descriptions() const;
};

// Rows: from_code \t to_code [\t description]. A first row starting with
// "from_code" is a header. Repeated (from, to) pairs are dropped and counted.
CodeMap parse_mapping(std::string_view tsv, std::string scheme_from = "ICD-O",
                      std::string scheme_to = "SNOMED-CT");
CodeMap load_mapping(const std::filesystem::path& path, std::string scheme_from = "ICD-O",
                     std::string scheme_to = "SNOMED-CT");

struct EnrichResult {
  Corpus corpus;
  size_t added_count = 0;
};

// Appends (scheme_to, target) to every annotation holding a mapped
// scheme_from code, skipping codes it already has. Idempotent.
EnrichResult enrich_corpus(Corpus corpus, const CodeMap& map);

}  // namespace xlproj

#endif  // XLPROJ_ENRICH_HPP_
