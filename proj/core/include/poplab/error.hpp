#pragma once

#include <stdexcept>
#include <string>

namespace poplab {

enum class ErrorKind {
    validation,
    admissibility,
    capability,
    contract,
    parse,
    sampling,
    numeric,
    runtime,
    io,
};

const char* to_string(ErrorKind kind) noexcept;

// Base for everything the library throws on purpose. The kind decides the CLI
// exit code; the message should name the offending input.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const std::string& what) {
    if (!ok) fail(kind, what);
}

// 0 ok, 2 bad input, 3 runtime or numeric trouble, 4 filesystem.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace poplab
