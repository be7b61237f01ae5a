#pragma once

#include <stdexcept>
#include <string>

namespace qmlab {

// Error taxonomy shared by the library and the CLI.  The CLI maps these to
// process exit codes: DomainError -> 2, ResolutionError and BudgetError -> 3,
// VerificationError (and its subclasses) -> 4.

// Input outside the documented domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A requested computation cannot be carried out at the resolution implied by
// its inputs (grid too coarse, too few samples, ...).
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An accuracy-driven node or work estimate exceeds the configured budget.
// Raised instead of silently returning an inaccurate answer.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A self-check on a computed result failed.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An object produced by a constructive routine violates one of the
// invariants the construction is supposed to guarantee.
struct ConstructionError : VerificationError {
  using VerificationError::VerificationError;
};

}  // namespace qmlab
