#include "xlproj/flags.hpp"

#include <algorithm>

namespace xlproj {

std::string_view flag_name(FlagCode flag) {
  switch (flag) {
    case FlagCode::kDuplicate: return "DUPLICATE";
    case FlagCode::kAddedPunct: return "ADDED_PUNCT";
    case FlagCode::kTooShort: return "TOO_SHORT";
    case FlagCode::kBadBoundaryWord: return "BAD_BOUNDARY_WORD";
    case FlagCode::kNoAlnum: return "NO_ALNUM";
    case FlagCode::kLengthInflation: return "LENGTH_INFLATION";
    case FlagCode::kSingleton: return "SINGLETON";
    case FlagCode::kEmptyProjection: return "EMPTY_PROJECTION";
    case FlagCode::kCrossBeadGlue: return "CROSS_BEAD_GLUE";
  }
  return "?";
}

std::optional<FlagCode> parse_flag(std::string_view name) {
  for (auto f : kAllFlags) {
    if (flag_name(f) == name) return f;
  }
  return std::nullopt;
}

Severity flag_severity(FlagCode flag) {
  switch (flag) {
    case FlagCode::kNoAlnum:
    case FlagCode::kEmptyProjection:
    case FlagCode::kDuplicate:
      return Severity::kFalse;
    default:
      return Severity::kSuspicious;
  }
}

Severity max_severity(std::span<const FlagCode> flags) {
  Severity s = Severity::kClean;
  for (auto f : flags) s = std::max(s, flag_severity(f));
  return s;
}

std::string_view severity_name(Severity severity) {
  switch (severity) {
    case Severity::kClean: return "";
    case Severity::kSuspicious: return "suspicious";
    case Severity::kFalse: return "false";
  }
  return "";
}

std::optional<Severity> parse_severity(std::string_view name) {
  if (name.empty()) return Severity::kClean;
  if (name == "suspicious") return Severity::kSuspicious;
  if (name == "false") return Severity::kFalse;
  return std::nullopt;
}

}  // namespace xlproj
