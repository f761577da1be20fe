#pragma once

#include <stdexcept>
#include <string>

namespace pelab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition on an operation's inputs (bad range, grid mismatch, support violation).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Configuration or usage problem; the CLI maps it to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical guard tripped at run time (CFL, NaN, energy inequality, quadrature non-convergence).
class NumericalGuard : public Error {
public:
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw PreconditionError(what);
}

} // namespace pelab
