#pragma once

#include <stdexcept>
#include <string>

namespace tfgl {

enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidThickness,
  kInvalidConfig,
  kParseError,
  kSolverFailure,
  kEmptyLambda,
  kUndefinedCriticalField,
  kInvalidHypothesis,
  kDegeneratePlaquette,
  kSingularEvaluation,
  kOutOfDomain,
  kIoError,
};

const char* error_code_name(ErrorCode code) noexcept;

// Single exception type for the library; the code distinguishes the failure
// class so the C layer and the CLI can map it onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace tfgl
