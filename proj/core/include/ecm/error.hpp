#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecm {

enum class ErrorCode {
  DimensionMismatch,
  NonFinite,
  InvalidArgument,
  UnstableSystem,
  UnstableAbsSystem,
  SingularGramian,
  RepeatedEigenvalue,
  AsymmetricP,
  EmptyCandidateSet,
  InvalidJunction,
  ZeroWeight,
  InvalidInput,
  AlphaUndefined,
  PreconditionViolated,
  ZeroVector,
  NotPD,
  LambdaTildeTooSmall,
  IndexOutOfRange,
  FitDegenerate,
  DegenerateGraph,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. All library failures go through it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by the numbers (stability, singularity, ...)
  /// rather than by malformed input.
  bool is_numerical() const noexcept;

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace ecm
