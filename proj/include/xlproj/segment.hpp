#ifndef XLPROJ_SEGMENT_HPP_
#define XLPROJ_SEGMENT_HPP_

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlproj/standoff.hpp"

// Rule-based sentence splitting and word tokenization. Every function here
// is pure and offset-preserving.
namespace xlproj {

struct Sentence {
  size_t index = 0;
  size_t start = 0;
  size_t end = 0;

  bool operator==(const Sentence&) const = default;
};

struct Token {
  size_t sent_index = 0;
  size_t index_in_sentence = 0;
  size_t start = 0;
  size_t end = 0;
  std::string surface;

  bool operator==(const Token&) const = default;
};

// Words that end in '.' without ending a sentence ("Dr.", "approx.").
class Abbreviations {
 public:
  Abbreviations() = default;
  explicit Abbreviations(std::set<std::u32string> entries) : entries_(std::move(entries)) {}

  static const Abbreviations& defaults();
  // One abbreviation per line; '#' starts a comment.
  static Abbreviations parse(std::string_view text);
  static Abbreviations load(const std::filesystem::path& path);

  bool contains(std::u32string_view word) const {
    return entries_.count(std::u32string(word)) > 0;
  }
  size_t size() const { return entries_.size(); }

 private:
  std::set<std::u32string> entries_;
};

std::vector<Sentence> split_sentences(std::u32string_view text,
                                      const Abbreviations& abbreviations = Abbreviations::defaults());
std::vector<Sentence> split_sentences(const Document& doc,
                                      const Abbreviations& abbreviations = Abbreviations::defaults());

// Tokens of text[sent.start, sent.end), offsets relative to `text`.
std::vector<Token> tokenize(std::u32string_view text, const Sentence& sent);
std::vector<Token> tokenize(const Document& doc, const Sentence& sent);

// Tokens of every sentence, concatenated in document order.
std::vector<Token> tokenize_all(const Document& doc, std::span<const Sentence> sentences);

// Word tokens (those holding at least one letter or digit) in `text`.
size_t word_count(std::string_view text);

}  // namespace xlproj

#endif  // XLPROJ_SEGMENT_HPP_
