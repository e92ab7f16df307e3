#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rvkit {

enum class ErrorKind {
  MalformedRow,
  NonMonotoneTimestamp,
  NonPositivePrice,
  ConfigInvalid,
  DeltaTooLarge,
  EmptySlice,
  MissingSession,
  NoData,
  ZeroVolatilityDay,
  MismatchedKeys,
  InsufficientData,
  UnsupportedN,
  SingularJacobian,
  Io,
};

/// Coarse grouping used for process exit codes.
enum class ErrorCategory { Config, Data, Numerical };

std::string_view to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

/// Every failure raised by rvkit. `context` carries file/line or key
/// information when the raising site has it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string context = {});

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string context_;
};

}  // namespace rvkit
