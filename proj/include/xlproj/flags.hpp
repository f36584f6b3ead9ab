#ifndef XLPROJ_FLAGS_HPP_
#define XLPROJ_FLAGS_HPP_

#include <optional>
#include <span>
#include <string_view>

namespace xlproj {

// Review patterns raised on projected annotations.
enum class FlagCode {
  kDuplicate,
  kAddedPunct,
  kTooShort,
  kBadBoundaryWord,
  kNoAlnum,
  kLengthInflation,
  kSingleton,
  kEmptyProjection,
  kCrossBeadGlue,
};

inline constexpr FlagCode kAllFlags[] = {
    FlagCode::kDuplicate,       FlagCode::kAddedPunct, FlagCode::kTooShort,
    FlagCode::kBadBoundaryWord, FlagCode::kNoAlnum,    FlagCode::kLengthInflation,
    FlagCode::kSingleton,       FlagCode::kEmptyProjection, FlagCode::kCrossBeadGlue,
};

// Ordered: a record's severity is the maximum over its flags.
enum class Severity { kClean, kSuspicious, kFalse };

std::string_view flag_name(FlagCode flag);
std::optional<FlagCode> parse_flag(std::string_view name);

// NO_ALNUM, EMPTY_PROJECTION, and DUPLICATE are mechanically wrong ("false");
// everything else needs a human look ("suspicious").
Severity flag_severity(FlagCode flag);
Severity max_severity(std::span<const FlagCode> flags);

// "false", "suspicious", or "" for clean.
std::string_view severity_name(Severity severity);
std::optional<Severity> parse_severity(std::string_view name);

}  // namespace xlproj

#endif  // XLPROJ_FLAGS_HPP_
