#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hydronozzle {

enum class ErrorCode {
  NonPositiveProfile,
  SignConditionViolated,
  OutOfRange,
  MissingSecondDerivative,
  DegenerateWidth,
  OutsideNozzle,
  OutsideInterior,
  NoConvergence,
  BracketFailure,
  InversionFailure,
  NonPositiveV1,
  Stagnation,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status and a machine-readable record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hydronozzle
