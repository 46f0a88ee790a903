#include "ecm/error.hpp"

namespace ecm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnstableSystem: return "UnstableSystem";
    case ErrorCode::UnstableAbsSystem: return "UnstableAbsSystem";
    case ErrorCode::SingularGramian: return "SingularGramian";
    case ErrorCode::RepeatedEigenvalue: return "RepeatedEigenvalue";
    case ErrorCode::AsymmetricP: return "AsymmetricP";
    case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::InvalidJunction: return "InvalidJunction";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::AlphaUndefined: return "AlphaUndefined";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::LambdaTildeTooSmall: return "LambdaTildeTooSmall";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::FitDegenerate: return "FitDegenerate";
    case ErrorCode::DegenerateGraph: return "DegenerateGraph";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool Error::is_numerical() const noexcept {
  switch (code_) {
    case ErrorCode::UnstableSystem:
    case ErrorCode::UnstableAbsSystem:
    case ErrorCode::SingularGramian:
    case ErrorCode::RepeatedEigenvalue:
    case ErrorCode::AlphaUndefined:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::NotPD:
    case ErrorCode::FitDegenerate:
    case ErrorCode::DegenerateGraph:
      return true;
    default:
      return false;
  }
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ecm
