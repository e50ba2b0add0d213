#pragma once

#include <stdexcept>
#include <string>

namespace lightlike {

enum class ErrorKind {
    usage,           // caller passed malformed arguments
    input,           // numeric input violates a precondition (asymmetric, not SPD, ...)
    config,          // run configuration is invalid
    domain,          // parameter point outside the usable domain
    degeneracy,      // numerically singular frame or linear system
    geometry,        // geometric construction undefined at this point
    assumption,      // maximal-rank assumption violated
    branch_tracking, // root continuation failed
    io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitGeometry = 3;
inline constexpr int kExitCheckFailure = 4;

int exit_code_for(ErrorKind kind);

} // namespace lightlike
