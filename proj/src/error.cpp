#include "lightlike/error.hpp"

namespace lightlike {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::input: return "input";
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::assumption: return "assumption";
    case ErrorKind::branch_tracking: return "branch_tracking";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::input:
    case ErrorKind::config:
    case ErrorKind::io:
        return kExitValidation;
    default:
        return kExitGeometry;
    }
}

} // namespace lightlike
