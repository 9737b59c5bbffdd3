#include "hydronozzle/errors.hpp"

namespace hydronozzle {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::SignConditionViolated: return "SignConditionViolated";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MissingSecondDerivative: return "MissingSecondDerivative";
    case ErrorCode::DegenerateWidth: return "DegenerateWidth";
    case ErrorCode::OutsideNozzle: return "OutsideNozzle";
    case ErrorCode::OutsideInterior: return "OutsideInterior";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::NonPositiveV1: return "NonPositiveV1";
    case ErrorCode::Stagnation: return "Stagnation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hydronozzle
