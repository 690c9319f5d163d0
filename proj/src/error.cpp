#include "fisherwit/error.hpp"

namespace fisherwit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimensionLimit: return "DimensionLimit";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::InvalidPovm: return "InvalidPovm";
    case ErrorKind::InvalidChannel: return "InvalidChannel";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::InfiniteRobustness: return "InfiniteRobustness";
    case ErrorKind::InfeasibleWitness: return "InfeasibleWitness";
    case ErrorKind::NotBinary: return "NotBinary";
    case ErrorKind::EmptyFreeOps: return "EmptyFreeOps";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_validation_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::InfiniteRobustness:
      return false;
    default:
      return true;
  }
}

}  // namespace fisherwit
