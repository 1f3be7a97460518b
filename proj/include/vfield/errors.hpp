#pragma once

#include <stdexcept>
#include <string>

namespace vfield {

enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidBoost,
  kSingularPoint,
  kNearZeroWavefunction,
  kInsufficientComponents,
  kUnsupportedConfiguration,
  kQuadratureFailure,
  kDegenerateParameter,
  kUnknownRepresentation,
  kConfig,
  kIo,
  kUnknownScenario,
};

/// Every failure raised by the toolkit carries one of the codes above; the C
/// API maps them one-to-one onto vf_status values.
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

}  // namespace vfield
