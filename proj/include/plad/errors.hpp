#pragma once

#include <stdexcept>
#include <string>

namespace plad {

// Typed error codes so callers (and the CLI exit-code mapping) can tell
// precondition violations apart from runtime/scheme failures.
enum class ErrorCode {
    InvalidDimension,        // d outside the supported/meaningful range
    POutOfWindow,            // p outside (2d/(d+1), 3d/(d+1))
    AlphaOutOfRange,         // alpha outside (0, d)
    NonpositiveLambda,       // lambda <= 0
    CriticalityGapTooSmall,  // alpha_p + alpha <= 1
    EmptyKWindow,            // no admissible moment exponent
    BadArgument,             // other precondition violation
    ConfigError,             // malformed / invalid run configuration
    IoError,                 // file format or filesystem problem
    NonPositivityViolation,  // scheme produced a non-roundoff negative density
    InternalError,           // invariant broken inside the library
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace plad
