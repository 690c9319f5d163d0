#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fisherwit {

enum class ErrorKind {
  NonHermitian,
  NonSquare,
  DimensionLimit,
  DimensionMismatch,
  NotPositive,
  TraceNotOne,
  InvalidPovm,
  InvalidChannel,
  OutOfDomain,
  SizeLimit,
  NumericalFailure,
  InfiniteRobustness,
  InfeasibleWitness,
  NotBinary,
  EmptyFreeOps,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind) noexcept;

// True for kinds caused by malformed or out-of-contract input rather than
// by the numerics; the CLI maps these to exit status 2.
bool is_validation_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fisherwit
