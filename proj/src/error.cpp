#include "thinfilm_gl/error.hpp"

namespace tfgl {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidThickness: return "invalid-thickness";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kSolverFailure: return "solver-failure";
    case ErrorCode::kEmptyLambda: return "empty-lambda";
    case ErrorCode::kUndefinedCriticalField: return "undefined-critical-field";
    case ErrorCode::kInvalidHypothesis: return "invalid-hypothesis";
    case ErrorCode::kDegeneratePlaquette: return "degenerate-plaquette";
    case ErrorCode::kSingularEvaluation: return "singular-evaluation";
    case ErrorCode::kOutOfDomain: return "out-of-domain";
    case ErrorCode::kIoError: return "io-error";
  }
  return "unknown";
}

}  // namespace tfgl
