#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dalat {

enum class ErrorCode {
  InvalidParameter,
  ParseError,
  ValidationError,
  Disconnected,
  NoLeash,
  InvalidPath,
  NotAnalytic,
  ConsistencyError,
  ForbiddenParameter,
  ShapeError,
  ForbiddenSpectrum,
  SingularD,
  PoleError,
  NotRealizable,
  RankError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace dalat
