#include "sparseopt/error.hpp"

namespace sparseopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidGroupStructure: return "InvalidGroupStructure";
    case ErrorCode::InvalidLabels: return "InvalidLabels";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::UnsupportedForConstraint: return "UnsupportedForConstraint";
    case ErrorCode::UnsupportedPenalty: return "UnsupportedPenalty";
    case ErrorCode::UnsupportedLoss: return "UnsupportedLoss";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::TieDetected: return "TieDetected";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnknownSolver: return "UnknownSolver";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sparseopt
