#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparseopt {

enum class ErrorCode {
  DimensionMismatch,
  InvalidGroupStructure,
  InvalidLabels,
  NonPositiveParameter,
  NonFiniteValue,
  UnsupportedForConstraint,
  UnsupportedPenalty,
  UnsupportedLoss,
  SingularGram,
  TieDetected,
  OutOfRange,
  UnknownSolver,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; all library failures use it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sparseopt
