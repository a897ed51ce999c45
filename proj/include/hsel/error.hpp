#pragma once

#include <stdexcept>
#include <string>

namespace hsel {

enum class ErrorKind {
    InvalidArgument,
    InvalidDistribution,
    DomainMismatch,
    EmptySample,
    OptInfeasible,
    NotConverged,
    Config,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace hsel
