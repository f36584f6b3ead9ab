#ifndef XLPROJ_ERROR_HPP_
#define XLPROJ_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace xlproj {

enum class ErrorCode {
  kInvalidUtf8,
  kMalformedLine,
  kOffsetOutOfRange,
  kSurfaceMismatch,
  kDanglingNote,
  kInvalidAnnotation,
  kIo,
  kBackendUnavailable,
  kProtocol,
  kBatchTooLarge,
  kDimensionMismatch,
  kMalformedReport,
  kMalformedMapping,
  kUnknownScheme,
  kConfig,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception type; the code
// lets callers (notably the CLI) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  // The message without the code-name prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace xlproj

#endif  // XLPROJ_ERROR_HPP_
