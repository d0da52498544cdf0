#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace eivtls {

/// Base exception carrying a stable machine-readable code next to the
/// human-readable message.  The codes are part of the CLI contract and
/// must not change between releases.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Input contains NaN or infinite entries.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& message) : Error("non_finite", message) {}
};

/// A matrix required to be positive semidefinite has an eigenvalue below
/// the accepted slack.
class NotPsdError : public Error {
 public:
  explicit NotPsdError(const std::string& message) : Error("not_psd", message) {}
};

/// Shapes of the supplied operands do not line up.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error("dimension_mismatch", message) {}
};

/// An operand that must have full column rank does not.
class RankDeficientError : public Error {
 public:
  explicit RankDeficientError(const std::string& message) : Error("rank_deficient", message) {}
};

/// The exact-fit constraints of a correction problem cannot be satisfied.
class IncompatibleError : public Error {
 public:
  explicit IncompatibleError(const std::string& message) : Error("incompatible", message) {}
};

/// The weighted objective has no finite minimum for this input.
class NoSolutionError : public Error {
 public:
  explicit NoSolutionError(const std::string& message) : Error("no_solution", message) {}
};

/// A minimizing subspace exists but cannot be written in coefficient form
/// because its trailing square block is singular.
class NonGenericError : public Error {
 public:
  explicit NonGenericError(const std::string& message) : Error("non_generic", message) {}
};

/// The separation between the decision eigenvalues is below the gap
/// threshold, so the requested quantity is not reliably defined.
class GapTooSmallError : public Error {
 public:
  explicit GapTooSmallError(const std::string& message) : Error("gap_too_small", message) {}
};

/// A finite value was requested from an eigenvalue tagged as infinite.
class InfiniteEigenvalueError : public Error {
 public:
  explicit InfiniteEigenvalueError(const std::string& message)
      : Error("infinite_eigenvalue", message) {}
};

/// A simulation specification or run parameter is out of range.
class InvalidSpecError : public Error {
 public:
  explicit InvalidSpecError(const std::string& message) : Error("invalid_spec", message) {}
};

/// The scaling matrix of a diagnostic check is numerically singular, so
/// the check does not apply.
class SingularScalingError : public Error {
 public:
  explicit SingularScalingError(const std::string& message) : Error("singular_scaling", message) {}
};

/// A documented precondition of a diagnostic check fails on this input.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error("precondition_violated", message) {}
};

}  // namespace eivtls
