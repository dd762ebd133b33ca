#ifndef EMFRAC_ERRORS_HPP
#define EMFRAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace emfrac {

/// Base class for all recoverable errors raised by the library.
/// Validation errors (bad input) and solver errors (numerical failure)
/// derive from it so callers can map them to distinct exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
    using Error::Error;
};

struct SolverError : Error {
    using Error::Error;
};

// --- grid / field construction ---
struct TooSmall : ValidationError {
    using ValidationError::ValidationError;
};
struct NonSquareCells : ValidationError {
    using ValidationError::ValidationError;
};
struct UnlabeledEdge : ValidationError {
    using ValidationError::ValidationError;
};
struct GridMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct NonFiniteValue : ValidationError {
    using ValidationError::ValidationError;
};
struct OutOfRange : ValidationError {
    using ValidationError::ValidationError;
};

// --- linear and alternating solvers ---
struct SolverDiverged : SolverError {
    using SolverError::SolverError;
};
struct SingularSystem : SolverError {
    using SolverError::SolverError;
};
struct NoConvergence : SolverError {
    NoConvergence(int iterations, double last_delta, const std::string& msg)
        : SolverError(msg), iterations(iterations), last_delta(last_delta) {}
    int iterations;
    double last_delta;
};

// --- criteria / candidates ---
struct BadNormal : ValidationError {
    using ValidationError::ValidationError;
};
struct EmptyCandidate : ValidationError {
    using ValidationError::ValidationError;
};

// --- configurational integrals ---
struct NonZeroTrace : ValidationError {
    using ValidationError::ValidationError;
};
struct ContourOutOfDomain : ValidationError {
    using ValidationError::ValidationError;
};
struct TipOutsideDomain : ValidationError {
    using ValidationError::ValidationError;
};

// --- viscous traces ---
struct TraceTooShort : ValidationError {
    using ValidationError::ValidationError;
};

// --- configuration files ---
struct IoError : Error {
    using Error::Error;
};
struct MissingKey : ValidationError {
    explicit MissingKey(const std::string& key)
        : ValidationError("missing key: " + key), key(key) {}
    std::string key;
};
struct BadValue : ValidationError {
    BadValue(const std::string& key, const std::string& reason)
        : ValidationError("bad value for " + key + ": " + reason), key(key) {}
    std::string key;
};

}  // namespace emfrac

#endif
