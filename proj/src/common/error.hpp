#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dtm {

enum class ErrorCode {
  InvalidArgument,
  DivergentTransform,
  QuadratureNotConverged,
  FitUnstable,
  GridUnderResolved,
  BackwardOnly,
  StiffnessFailure,
  InvalidState,
  SignalDomainExceeded,
};

std::string_view error_name(ErrorCode code) noexcept;

/// True for the failures a caller should treat as numerical (as opposed to bad input).
bool is_numerical_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Compact number for messages; std::to_string prints 5.4e-44 as 0.000000.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidArgument, message);
}

}  // namespace dtm
