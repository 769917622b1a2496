#pragma once

#include <stdexcept>
#include <string>

namespace refrig {

enum class ErrorKind {
    validation,   // bad parameters or inputs
    solver,       // integrator/quadrature/truncation failure or model violation
    cross_check,  // independent solution routes disagree
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// CLI exit code for an error category.
inline int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::solver:
    case ErrorKind::cross_check: return 3;
    case ErrorKind::io: return 4;
    }
    return 1;
}

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(ErrorKind::validation, msg);
}

} // namespace detail
} // namespace refrig
