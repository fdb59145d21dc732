#pragma once

#include <stdexcept>
#include <string>

namespace trackctl {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Dimension mismatch between operands (messages name both shapes).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A linear solve or inversion hit a pivot below the singularity threshold.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// A documented precondition was violated (asymmetric input, bad onset, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// The closed-loop matrix has spectral radius >= 1 (or the Lyapunov solve
/// could not produce a positive definite witness).
class NotSchurStableError : public Error {
public:
    using Error::Error;
};

/// The requested synthesis has no solution for this plant/reference pair.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// A computation produced a non-finite value or violated a numeric contract.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Configuration file could not be read, parsed, or validated.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace trackctl
