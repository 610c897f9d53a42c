#pragma once

#include <stdexcept>
#include <string>

namespace qsep {

// Invalid model parameters; the message names the violated constraint.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A series could not meet its tail-bound target within the term budget.
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// The requested Fock-space truncation cannot reach the tail tolerance.
struct TruncationTooSmall : std::runtime_error {
    explicit TruncationTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// A materialized density matrix produced an eigenvalue below -1e-12;
// signals a construction bug, never expected on valid inputs.
struct NegativeEigenvalue : std::runtime_error {
    explicit NegativeEigenvalue(const std::string& what) : std::runtime_error(what) {}
};

// The cyclic Jacobi solver exceeded its sweep cap.
struct EigensolverStall : std::runtime_error {
    explicit EigensolverStall(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qsep
