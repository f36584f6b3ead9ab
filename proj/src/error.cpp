#include "xlproj/error.hpp"

namespace xlproj {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidUtf8: return "InvalidUtf8";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kOffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorCode::kSurfaceMismatch: return "SurfaceMismatch";
    case ErrorCode::kDanglingNote: return "DanglingNote";
    case ErrorCode::kInvalidAnnotation: return "InvalidAnnotation";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kProtocol: return "ProtocolError";
    case ErrorCode::kBatchTooLarge: return "BatchTooLarge";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMalformedReport: return "MalformedReport";
    case ErrorCode::kMalformedMapping: return "MalformedMapping";
    case ErrorCode::kUnknownScheme: return "UnknownScheme";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Error";
}

}  // namespace xlproj
