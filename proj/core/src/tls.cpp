#include "eivtls/tls.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "eivtls/errors.hpp"

namespace eivtls {

ObservationSet::ObservationSet(Eigen::MatrixXd c, Eigen::Index n, Eigen::Index d)
    : c_(std::move(c)), n_(n), d_(d) {
  if (n_ < 1 || d_ < 1) throw DimensionError("ObservationSet: need n >= 1 and d >= 1");
  if (c_.rows() < 1) throw DimensionError("ObservationSet: need at least one row");
  if (c_.cols() != n_ + d_)
    throw DimensionError("ObservationSet: joint matrix must have n + d columns");
  if (!c_.allFinite()) throw NonFiniteError("ObservationSet: non-finite entries");
}

ObservationSet::ObservationSet(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
    : ObservationSet(
          [&] {
            if (a.rows() != b.rows())
              throw DimensionError("ObservationSet: blocks have different row counts");
            Eigen::MatrixXd c(a.rows(), a.cols() + b.cols());
            c << a, b;
            return c;
          }(),
          a.cols(), b.cols()) {}

ObservationSet ObservationSet::from_joint(const Eigen::MatrixXd& c, Eigen::Index n,
                                          Eigen::Index d) {
  return ObservationSet(c, n, d);
}

ErrorCovariance::ErrorCovariance(const SymmetricMatrix& sigma, const ToleranceConfig& tol)
    : sigma_(sigma) {
  (void)psd_eigendecompose(sigma_, tol);
}

Eigen::MatrixXd minimal_correction(const Eigen::MatrixXd& c, const ErrorCovariance& cov,
                                   const Eigen::MatrixXd& x, const ToleranceConfig& tol) {
  if (c.cols() != cov.dim()) throw DimensionError("minimal_correction: C and sigma disagree");
  if (x.rows() != cov.dim()) throw DimensionError("minimal_correction: x has wrong height");
  const Eigen::Index d = x.cols();
  if (d < 1) throw DimensionError("minimal_correction: x has no columns");
  if (numerical_rank(x, tol) < d)
    throw RankDeficientError("minimal_correction: x is rank deficient");

  const Eigen::MatrixXd xs = x.transpose() * cov.matrix();   // d x (n+d)
  const Eigen::MatrixXd xc = x.transpose() * c.transpose();  // d x m

  // The constraints (C - delta) x = 0 with delta supported on the error
  // directions are solvable iff span(x^T C^T) lies inside span(x^T sigma).
  Eigen::MatrixXd stacked(d, xs.cols() + xc.cols());
  stacked << xs, xc;
  if (numerical_rank(stacked, tol) != numerical_rank(xs, tol))
    throw IncompatibleError("minimal_correction: exact-fit constraints are incompatible");

  const SymmetricMatrix g(x.transpose() * cov.matrix() * x);
  return c * x * pinv(g.matrix(), tol) * xs;
}

double criterion_frobenius(const Eigen::MatrixXd& delta, const ErrorCovariance& cov,
                           const ToleranceConfig& tol) {
  if (delta.cols() != cov.dim())
    throw DimensionError("criterion_frobenius: delta and sigma disagree");
  const Eigen::MatrixXd w = pinv(psd_sqrt(cov.sym(), tol).matrix(), tol);
  return (delta * w).norm();
}

double criterion_spectral(const Eigen::MatrixXd& delta, const ErrorCovariance& cov,
                          const ToleranceConfig& tol) {
  if (delta.cols() != cov.dim())
    throw DimensionError("criterion_spectral: delta and sigma disagree");
  const Eigen::MatrixXd w = pinv(psd_sqrt(cov.sym(), tol).matrix(), tol);
  const Eigen::MatrixXd g = delta * w;
  Eigen::MatrixXd gram = g.transpose() * g;
  gram = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues()(gram.rows() - 1));
}

double rayleigh_functional(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c,
                           const ErrorCovariance& cov, const ToleranceConfig& tol) {
  if (c.cols() != cov.dim()) throw DimensionError("rayleigh_functional: C and sigma disagree");
  if (x.rows() != cov.dim()) throw DimensionError("rayleigh_functional: x has wrong height");
  const Eigen::MatrixXd xsx_raw = x.transpose() * cov.matrix() * x;
  const SymmetricMatrix xsx(xsx_raw);
  if (numerical_rank(xsx.matrix(), tol) < x.cols())
    throw RankDeficientError("rayleigh_functional: x^T sigma x is singular");
  const Eigen::MatrixXd cx = c * x;
  const SymmetricMatrix xgx(cx.transpose() * cx);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(xgx.matrix(), xsx.matrix());
  if (ges.info() != Eigen::Success)
    throw Error("eigensolver_failed", "generalized eigendecomposition did not converge");
  return ges.eigenvalues()(x.cols() - 1);
}

TlsSolution estimate(const ObservationSet& obs, const ErrorCovariance& cov,
                     const ToleranceConfig& tol) {
  if (cov.dim() != obs.extended_dim())
    throw DimensionError("estimate: sigma must be (n + d) x (n + d)");
  const Eigen::Index d = obs.d();

  const SymmetricMatrix gram(gram_matrix(obs.c()));
  const PencilDiagonalization diag = simultaneous_diagonalize(gram, cov.sym(), tol);

  if (diag.nu[static_cast<std::size_t>(d - 1)].is_infinite())
    throw NoSolutionError("estimate: the weighted criterion has no finite minimum");

  const Eigen::MatrixXd raw = diag.eigenvectors.leftCols(d);
  const Eigen::MatrixXd u_top = raw.topRows(obs.n());
  const Eigen::MatrixXd u_bottom = raw.bottomRows(d);

  TlsSolution sol;
  const ExtendedReal nu_d = diag.nu[static_cast<std::size_t>(d - 1)];
  const ExtendedReal nu_next = diag.nu[static_cast<std::size_t>(d)];
  sol.nu.assign(diag.nu.begin(), diag.nu.begin() + d + 1);
  sol.uniqueness_gap = nu_next.is_infinite()
                           ? ExtendedReal::infinite()
                           : ExtendedReal::finite(nu_next.value() - nu_d.value());
  sol.unique = nu_next.is_infinite() ||
               (nu_next.value() - nu_d.value()) > tol.gap_rtol * (1.0 + nu_d.value());

  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u_bottom);
    const Eigen::VectorXd& sv = svd.singularValues();
    sol.bottom_block_condition = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  }
  if (numerical_rank(u_bottom, tol) < d)
    throw NonGenericError(
        "estimate: minimizing subspace has no coefficient representation (singular trailing "
        "block)");

  // x_hat = -u_top * u_bottom^{-1}, via a solve rather than an inverse.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(u_bottom.transpose());
  sol.x_hat = -(qr.solve(u_top.transpose())).transpose();

  sol.x_ext.resize(obs.extended_dim(), d);
  sol.x_ext.topRows(obs.n()) = sol.x_hat;
  sol.x_ext.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);

  sol.delta = minimal_correction(obs.c(), cov, sol.x_ext, tol);

  double nu_sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) nu_sum += diag.nu[static_cast<std::size_t>(i)].value();
  sol.frobenius_min = std::sqrt(nu_sum);
  sol.spectral_min = nu_d.value();
  return sol;
}

Eigen::MatrixXd classical_tls_oracle(const ObservationSet& obs, const ToleranceConfig& tol) {
  const Eigen::Index n = obs.n();
  const Eigen::Index d = obs.d();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs.c(), Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();

  const double sigma_n = n <= sv.size() ? sv(n - 1) : 0.0;
  const double sigma_next = n < sv.size() ? sv(n) : 0.0;
  if (!(sigma_n > 0.0) || (sigma_n - sigma_next) <= tol.gap_rtol * sigma_n)
    throw GapTooSmallError("classical_tls_oracle: singular value gap below threshold");

  const Eigen::MatrixXd v2 = svd.matrixV().rightCols(d);
  const Eigen::MatrixXd v_top = v2.topRows(n);
  const Eigen::MatrixXd v_bottom = v2.bottomRows(d);
  if (numerical_rank(v_bottom, tol) < d)
    throw NonGenericError("classical_tls_oracle: singular trailing block");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v_bottom.transpose());
  return -(qr.solve(v_top.transpose())).transpose();
}

}  // namespace eivtls
