#pragma once

#include <stdexcept>
#include <string>

namespace eigenfit {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed problem input: non-square A, k > n, dimension mismatches,
// non-finite entries, out-of-range indices.
class InvalidSpecError : public Error {
public:
    using Error::Error;
};

// Decomposition (SVD / eigenvalue) failed to converge.
class DecompositionError : public Error {
public:
    using Error::Error;
};

// A qualification needed for the optimal-perturbation construction does not
// hold (rank-deficient V); callers may fall back to an upper-bound-only path.
class QualificationError : public Error {
public:
    using Error::Error;
};

// An eigenvector chain vector came out numerically zero; carries the
// 1-based index of the offending vector.
class DegenerateChainError : public Error {
public:
    DegenerateChainError(const std::string& what, int index)
        : Error(what), index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

// The null-vector construction could not produce validated null vectors
// (typically a missing generalized-eigenvector chain).
class OracleUnavailableError : public Error {
public:
    using Error::Error;
};

// Every optimizer restart failed to produce a usable point.
class OptimizationError : public Error {
public:
    using Error::Error;
};

// A linear system stayed numerically singular after repair.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

}  // namespace eigenfit
