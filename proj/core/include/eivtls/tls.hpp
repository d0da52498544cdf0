#pragma once

#include <vector>

#include "eivtls/pencil.hpp"

namespace eivtls {

/// Observed data for the relation A X = B: an m x n regressor block and
/// an m x d response block, kept jointly as C = [A B].
class ObservationSet {
 public:
  ObservationSet(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

  static ObservationSet from_joint(const Eigen::MatrixXd& c, Eigen::Index n, Eigen::Index d);

  const Eigen::MatrixXd& c() const noexcept { return c_; }
  Eigen::MatrixXd a() const { return c_.leftCols(n_); }
  Eigen::MatrixXd b() const { return c_.rightCols(d_); }

  Eigen::Index m() const noexcept { return c_.rows(); }
  Eigen::Index n() const noexcept { return n_; }
  Eigen::Index d() const noexcept { return d_; }
  Eigen::Index extended_dim() const noexcept { return n_ + d_; }

 private:
  ObservationSet(Eigen::MatrixXd c, Eigen::Index n, Eigen::Index d);

  Eigen::MatrixXd c_;
  Eigen::Index n_ = 0;
  Eigen::Index d_ = 0;
};

/// Known shape of the per-row error covariance, up to an unknown scalar
/// factor.  May be singular; rows with zero variance model error-free
/// coordinates.  Validated PSD on construction.
class ErrorCovariance {
 public:
  explicit ErrorCovariance(const SymmetricMatrix& sigma, const ToleranceConfig& tol = {});

  const SymmetricMatrix& sym() const noexcept { return sigma_; }
  const Eigen::MatrixXd& matrix() const noexcept { return sigma_.matrix(); }
  Eigen::Index dim() const noexcept { return sigma_.dim(); }

 private:
  SymmetricMatrix sigma_;
};

/// Result of the weighted total least squares fit.
struct TlsSolution {
  /// Coefficient estimate, n x d.
  Eigen::MatrixXd x_hat;
  /// Extended form (x_hat; -I), (n+d) x d; its span is the minimizing
  /// subspace.
  Eigen::MatrixXd x_ext;
  /// Correction applied to C: (C - delta) x_ext = 0 and delta is the
  /// smallest weighted correction achieving that.
  Eigen::MatrixXd delta;
  /// First d+1 generalized eigenvalues of the data/covariance pencil,
  /// ascending; nu[d] may be infinite.
  std::vector<ExtendedReal> nu;
  /// Minimal weighted Frobenius criterion value, sqrt(nu_1 + ... + nu_d).
  double frobenius_min = 0.0;
  /// Minimal weighted spectral criterion value, nu_d.
  double spectral_min = 0.0;
  /// nu_{d+1} - nu_d.
  ExtendedReal uniqueness_gap;
  /// True when the gap clears gap_rtol * (1 + nu_d), i.e. the minimizing
  /// subspace is numerically well separated.
  bool unique = false;
  /// Reciprocal condition number of the trailing d x d block of the raw
  /// pencil eigenvector matrix, before renormalization.
  double bottom_block_condition = 0.0;
};

/// Weighted total least squares estimate for A X ~ B with row errors of
/// covariance proportional to sigma.  Minimizes the Frobenius norm of
/// delta * pinv(psd_sqrt(sigma)) over corrections delta that make
/// (C - delta) X_ext = 0 solvable; the same subspace also minimizes the
/// spectral criterion.  Throws NoSolutionError when no finite minimum
/// exists and NonGenericError when the minimizing subspace has no
/// coefficient representation.
TlsSolution estimate(const ObservationSet& obs, const ErrorCovariance& cov,
                     const ToleranceConfig& tol = {});

/// Smallest (in the weighted Loewner order) correction delta with
/// (C - delta) x = 0: delta = C x (x^T sigma x)^+ x^T sigma.  Throws
/// IncompatibleError when the constraints cannot be met, i.e. when
/// span(x^T C^T) is not contained in span(x^T sigma).
Eigen::MatrixXd minimal_correction(const Eigen::MatrixXd& c, const ErrorCovariance& cov,
                                   const Eigen::MatrixXd& x, const ToleranceConfig& tol = {});

/// || delta * pinv(psd_sqrt(sigma)) ||_F.
double criterion_frobenius(const Eigen::MatrixXd& delta, const ErrorCovariance& cov,
                           const ToleranceConfig& tol = {});

/// lambda_max(delta * pinv(sigma) * delta^T).
double criterion_spectral(const Eigen::MatrixXd& delta, const ErrorCovariance& cov,
                          const ToleranceConfig& tol = {});

/// lambda_max((x^T sigma x)^-1 x^T C^T C x); its minimum over full-rank
/// extended coefficient matrices equals nu_d.  Requires x^T sigma x
/// nonsingular.
double rayleigh_functional(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c,
                           const ErrorCovariance& cov, const ToleranceConfig& tol = {});

/// Unweighted (sigma = I) total least squares via the SVD of C: an
/// independent reference path used to cross-check `estimate`.  Throws
/// GapTooSmallError when sigma_n and sigma_{n+1} are not separated by a
/// relative gap of at least gap_rtol.
Eigen::MatrixXd classical_tls_oracle(const ObservationSet& obs, const ToleranceConfig& tol = {});

}  // namespace eivtls
