#include "dalat/error.hpp"

namespace dalat {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NoLeash: return "NoLeash";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::NotAnalytic: return "NotAnalytic";
    case ErrorCode::ConsistencyError: return "ConsistencyError";
    case ErrorCode::ForbiddenParameter: return "ForbiddenParameter";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::ForbiddenSpectrum: return "ForbiddenSpectrum";
    case ErrorCode::SingularD: return "SingularD";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::RankError: return "RankError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace dalat
