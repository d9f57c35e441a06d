// levyzero: potential theory and local-time penalisation for one-dimensional
// Levy processes.  Distributed under the MIT license; see LICENSE.
#pragma once

#include <stdexcept>
#include <string>

namespace levyzero {

enum class ErrorCode {
  NonIntegrableResolvent,   // 1/(q+Psi) not absolutely integrable
  QuadratureNoConvergence,  // adaptive integration exhausted its budget
  ExtrapolationUnstable,    // q->0 extrapolants failed to settle
  DegenerateDenominator,    // a formula denominator is (numerically) zero
  NotTransient,             // operation requires a transient model
  InvalidClock,             // clock parameters are inconsistent
  MissingLevelLocalTime,    // state lacks the level-a local time required here
  StartingPointNotInH,      // h-transform start point has zero weight
  UnnormalizedWeight,       // weight must integrate to 1 for this operation
  UnsupportedModel,         // parameters outside the supported domain
  HorizonExceeded,          // too many paths censored at the time horizon
  InvalidArgument,          // malformed CLI/config input
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonIntegrableResolvent: return "NonIntegrableResolvent";
    case ErrorCode::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorCode::ExtrapolationUnstable: return "ExtrapolationUnstable";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NotTransient: return "NotTransient";
    case ErrorCode::InvalidClock: return "InvalidClock";
    case ErrorCode::MissingLevelLocalTime: return "MissingLevelLocalTime";
    case ErrorCode::StartingPointNotInH: return "StartingPointNotInH";
    case ErrorCode::UnnormalizedWeight: return "UnnormalizedWeight";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace levyzero
