#pragma once

#include <vector>

#include <Eigen/Core>

#include "eivtls/tolerance.hpp"

namespace eivtls {

/// Sines of the canonical angles between two column spans, descending.
struct SubspaceAngles {
  std::vector<double> sines;
  double max_sine = 0.0;
};

/// Canonical angle sines between span(x1) and span(x2), computed from the
/// singular values of (I - P2) Q1 with Q1, Q2 orthonormal bases obtained
/// by QR.  Requires full column rank on both sides and
/// cols(x1) <= cols(x2).  Values are clipped into [0, 1]; anything more
/// than 1e-12 outside is reported as an error rather than clipped.
SubspaceAngles canonical_sines(const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2,
                               const ToleranceConfig& tol = {});

/// Upper bound on the coefficient-space error of a subspace estimate: for
/// a subspace at maximal angle sine s from the span of (X0; -I), the
/// coefficient matrix read off from it differs from X0 in spectral norm
/// by at most this value.  Returns +infinity when
/// s >= 1 / sqrt(1 + x0_norm^2); strictly increasing in s below that.
double xhat_error_bound(double max_sine, double x0_norm);

}  // namespace eivtls
