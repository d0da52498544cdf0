#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eivtls/checks.hpp"

namespace eivtls::verify {

/// Aggregated result of one verification sweep.  `checked` counts
/// instances that met their preconditions; `skipped` counts resampled or
/// not-applicable draws; `notes` carries per-subcheck counters for the
/// CLI to print.
struct SuiteResult {
  std::string name;
  long checked = 0;
  long violations = 0;
  long skipped = 0;
  std::vector<std::string> notes;
};

/// Random PSD pairs (with singular second forms, singular sums and
/// range-aligned subcases mixed in): reconstruction of both forms from
/// the diagonalization, the per-column eigen-equation, the variational
/// residual at every finite index, the pseudoinverse identity on
/// range-aligned pairs, and scale equivariance of the eigenvalues.
SuiteResult run_pencil_suite(long pairs, std::uint64_t seed, const ToleranceConfig& tol = {});

/// Subspace-angle bound on realized fits for a multi-response and an
/// error-free-column univariate model at fixed m.
SuiteResult run_sin_bound_sweep(long replicates, std::uint64_t seed,
                                const ToleranceConfig& tol = {});

/// Randomized kernel-perturbation instances (mixing d = 1 / d = 2 and
/// positive definite / singular second forms) checked against the
/// eigenvector perturbation bound.
SuiteResult run_perturbation_sweep(long replicates, std::uint64_t seed,
                                   const ToleranceConfig& tol = {});

/// Random (matrix, coefficient) pairs close enough in angle for the
/// recovery bound to apply; checks ||A B^{-1} + X0|| against
/// xhat_error_bound.
SuiteResult run_recovery_bound_sweep(long replicates, std::uint64_t seed);

/// Agreement of `estimate` with the SVD-based classical oracle on
/// identity-covariance instances with a clear uniqueness gap.
SuiteResult run_classical_agreement(long instances, std::uint64_t seed,
                                    const ToleranceConfig& tol = {});

/// Agreement of `estimate` with the scalar grid-search oracle, mixing
/// full and singular covariances.
SuiteResult run_brute_force_agreement(long instances, std::uint64_t seed, const GridSpec& grid,
                                      const ToleranceConfig& tol = {});

/// Umbrella suites exposed by the CLI.
SuiteResult run_bounds_suite(long replicates, std::uint64_t seed, const ToleranceConfig& tol = {});
SuiteResult run_oracle_suite(long replicates, std::uint64_t seed, const ToleranceConfig& tol = {});

}  // namespace eivtls::verify
