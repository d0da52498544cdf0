#pragma once

#include "eivtls/model.hpp"
#include "eivtls/tls.hpp"

namespace eivtls {

/// Outcome of the finite-sample subspace-angle bound check: with
/// N = C0^T C0 + lambda_min(A0^T A0) I and
/// epsilon = || N^{-1/2} (C^T C - m sigma - C0^T C0) N^{-1/2} ||,
/// the squared maximal angle sine between the estimated and true extended
/// coefficient spans must not exceed
/// 2 epsilon (1 + ||sigma|| lambda_max((X0e^T sigma X0e)^{-1} X0e^T X0e)).
struct SinBoundCheck {
  double epsilon = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Evaluates the bound above for one realized dataset and fit.  Requires
/// lambda_min(A0^T A0) > abs_floor (otherwise SingularScalingError) and
/// X0e^T sigma X0e nonsingular (otherwise PreconditionError).  `holds`
/// allows 1e-8 slack.
SinBoundCheck check_sin_bound(const ObservationSet& obs, const Truth& truth,
                              const TlsSolution& solution, const ErrorCovariance& cov,
                              const ToleranceConfig& tol = {});

/// Outcome of the eigenvector-perturbation bound check.
struct PerturbationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// For symmetric A with d-dimensional kernel spanned by x0
/// (eigenvalues 0 = lambda_1 = ... = lambda_d < lambda_{d+1}), PSD B with
/// x0^T B x0 nonsingular, perturbation A~, and x_star minimizing
/// lambda_max((X^T B X)^{-1} X^T (A + A~) X), checks
///
///   ||sin angles(x_star, x0)||^2
///     <= (||A~|| / lambda_{d+1}(A)) (1 + ||B|| lambda_max((x0^T B x0)^{-1} x0^T x0)).
///
/// For d = 1 the sharper factor
/// (1 + (||x0||^2 / x0^T B x0) (x_star^T B x_star / ||x_star||^2)) is
/// used.  Violated preconditions raise PreconditionError; `holds` allows
/// 1e-8 slack.
PerturbationCheck check_perturbation_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                           const Eigen::MatrixXd& a_tilde,
                                           const Eigen::MatrixXd& x0,
                                           const Eigen::MatrixXd& x_star,
                                           const ToleranceConfig& tol = {});

struct GridSpec {
  double lo = -5.0;
  double hi = 5.0;
  double step = 1e-4;
};

/// Scalar (n = d = 1) reference estimator: scans the coefficient over the
/// grid, forms the minimal correction at each point and returns the grid
/// argmin of the weighted Frobenius criterion.  Grid points with
/// incompatible constraints are skipped; if every point is incompatible
/// the error propagates.  Independent of the spectral pencil path, so it
/// serves as a brute-force oracle for `estimate`.
double brute_force_tls(const ObservationSet& obs, const ErrorCovariance& cov,
                       const GridSpec& grid, const ToleranceConfig& tol = {});

}  // namespace eivtls
