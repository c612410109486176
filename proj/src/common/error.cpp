#include "common/error.hpp"

namespace dtm {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DivergentTransform: return "DivergentTransform";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::FitUnstable: return "FitUnstable";
    case ErrorCode::GridUnderResolved: return "GridUnderResolved";
    case ErrorCode::BackwardOnly: return "BackwardOnly";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::SignalDomainExceeded: return "SignalDomainExceeded";
  }
  return "Unknown";
}

bool is_numerical_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DivergentTransform:
    case ErrorCode::QuadratureNotConverged:
    case ErrorCode::FitUnstable:
    case ErrorCode::StiffnessFailure:
    case ErrorCode::SignalDomainExceeded:
      return true;
    default:
      return false;
  }
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace dtm
