#pragma once

#include <stdexcept>
#include <string>

namespace prefeval {

enum class ErrorKind {
    InvalidArgument,
    NotFound,
    Conflict,
    Io,
};

/// Exception type thrown by every module in the toolkit. The kind lets the
/// HTTP layer and the CLI map failures onto status codes and exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error invalid_argument(const std::string& what) {
    return Error(ErrorKind::InvalidArgument, what);
}

}  // namespace prefeval
