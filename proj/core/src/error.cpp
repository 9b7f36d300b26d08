#include "poplab/error.hpp"

namespace poplab {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::validation: return "validation error";
        case ErrorKind::admissibility: return "admissibility error";
        case ErrorKind::capability: return "capability error";
        case ErrorKind::contract: return "contract error";
        case ErrorKind::parse: return "parse error";
        case ErrorKind::sampling: return "sampling error";
        case ErrorKind::numeric: return "numeric error";
        case ErrorKind::runtime: return "runtime error";
        case ErrorKind::io: return "io error";
    }
    return "error";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::validation:
        case ErrorKind::admissibility:
        case ErrorKind::contract:
        case ErrorKind::parse:
            return 2;
        case ErrorKind::io:
            return 4;
        default:
            return 3;
    }
}

}  // namespace poplab
