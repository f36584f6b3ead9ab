#include "xlproj/enrich.hpp"

#include <algorithm>

#include "xlproj/error.hpp"
#include "xlproj/fsutil.hpp"

namespace xlproj {

size_t CodeMap::size() const {
  size_t n = 0;
  for (const auto& [from, targets] : entries) n += targets.size();
  return n;
}

std::map<std::string, std::string> CodeMap::descriptions() const {
  std::map<std::string, std::string> out;
  for (const auto& [from, targets] : entries) {
    for (const auto& t : targets) {
      if (!t.description.empty()) out.emplace(t.code, t.description);
    }
  }
  return out;
}

CodeMap parse_mapping(std::string_view tsv, std::string scheme_from, std::string scheme_to) {
  CodeMap map;
  map.scheme_from = std::move(scheme_from);
  map.scheme_to = std::move(scheme_to);
  size_t pos = 0;
  size_t line_no = 0;
  while (pos < tsv.size()) {
    size_t nl = tsv.find('\n', pos);
    if (nl == std::string_view::npos) nl = tsv.size();
    auto line = tsv.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("from_code")) continue;

    size_t tab1 = line.find('\t');
    if (tab1 == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedMapping,
                  "line " + std::to_string(line_no) + ": expected at least two columns");
    }
    size_t tab2 = line.find('\t', tab1 + 1);
    auto from = line.substr(0, tab1);
    auto to = line.substr(tab1 + 1, tab2 == std::string_view::npos ? tab2 : tab2 - tab1 - 1);
    auto description = tab2 == std::string_view::npos ? std::string_view{} : line.substr(tab2 + 1);
    if (from.empty() || to.empty()) {
      throw Error(ErrorCode::kMalformedMapping,
                  "line " + std::to_string(line_no) + ": empty code");
    }
    auto& targets = map.entries[std::string(from)];
    bool seen = std::any_of(targets.begin(), targets.end(),
                            [&](const MappedCode& m) { return m.code == to; });
    if (seen) {
      ++map.duplicate_rows;
      continue;
    }
    targets.push_back({std::string(to), std::string(description)});
  }
  return map;
}

CodeMap load_mapping(const std::filesystem::path& path, std::string scheme_from,
                     std::string scheme_to) {
  return parse_mapping(read_file(path), std::move(scheme_from), std::move(scheme_to));
}

EnrichResult enrich_corpus(Corpus corpus, const CodeMap& map) {
  EnrichResult result;
  for (auto& entry : corpus.entries) {
    for (auto& ann : entry.annotations) {
      // Iterate over a snapshot: appended codes are never themselves sources.
      const auto original = ann.codes;
      for (const auto& code : original) {
        if (code.scheme != map.scheme_from) continue;
        auto it = map.entries.find(code.value);
        if (it == map.entries.end()) continue;
        for (const auto& target : it->second) {
          Code added{map.scheme_to, target.code};
          if (std::find(ann.codes.begin(), ann.codes.end(), added) != ann.codes.end()) continue;
          ann.codes.push_back(std::move(added));
          ++result.added_count;
        }
      }
    }
  }
  result.corpus = std::move(corpus);
  return result;
}

}  // namespace xlproj
