#include "rvkit/error.hpp"

namespace rvkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::NonMonotoneTimestamp: return "NonMonotoneTimestamp";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorKind::EmptySlice: return "EmptySlice";
    case ErrorKind::MissingSession: return "MissingSession";
    case ErrorKind::NoData: return "NoData";
    case ErrorKind::ZeroVolatilityDay: return "ZeroVolatilityDay";
    case ErrorKind::MismatchedKeys: return "MismatchedKeys";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::UnsupportedN: return "UnsupportedN";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigInvalid:
    case ErrorKind::DeltaTooLarge:
    case ErrorKind::UnsupportedN:
      return ErrorCategory::Config;
    case ErrorKind::SingularJacobian:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(ErrorKind kind, const std::string& message, std::string context)
    : std::runtime_error(context.empty() ? message : context + ": " + message),
      kind_(kind),
      context_(std::move(context)) {}

}  // namespace rvkit
