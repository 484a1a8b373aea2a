#pragma once

#include <stdexcept>
#include <string>

namespace lbcac {

// Failure taxonomy shared by the whole toolkit. The category drives the
// CLI exit-code mapping: Input -> 2, Domain -> 3, Solver -> 4.
enum class Errc {
  // input / validation
  ParseError,
  EmptyMatrix,
  NotSymmetric,
  NonZeroDiagonal,
  NonBinaryEntry,
  DimensionMismatch,
  NegativeEntry,
  DegenerateWeights,
  DegenerateCoefficients,
  EmptyDataset,
  InvalidArgument,
  // domain
  ZeroLocalCalls,
  InvalidNoise,
  NegativeFlow,
  UndecomposableResidual,
  PathExplosion,
  // solver
  NumericalFailure,
  InfeasibleModel,
  SolverFailure,
};

enum class ErrorCategory { Input, Domain, Solver };

constexpr ErrorCategory category_of(Errc c) {
  switch (c) {
    case Errc::ZeroLocalCalls:
    case Errc::InvalidNoise:
    case Errc::NegativeFlow:
    case Errc::UndecomposableResidual:
    case Errc::PathExplosion:
      return ErrorCategory::Domain;
    case Errc::NumericalFailure:
    case Errc::InfeasibleModel:
    case Errc::SolverFailure:
      return ErrorCategory::Solver;
    default:
      return ErrorCategory::Input;
  }
}

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NonZeroDiagonal: return "NonZeroDiagonal";
    case Errc::NonBinaryEntry: return "NonBinaryEntry";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::DegenerateWeights: return "DegenerateWeights";
    case Errc::DegenerateCoefficients: return "DegenerateCoefficients";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroLocalCalls: return "ZeroLocalCalls";
    case Errc::InvalidNoise: return "InvalidNoise";
    case Errc::NegativeFlow: return "NegativeFlow";
    case Errc::UndecomposableResidual: return "UndecomposableResidual";
    case Errc::PathExplosion: return "PathExplosion";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::InfeasibleModel: return "InfeasibleModel";
    case Errc::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace lbcac
