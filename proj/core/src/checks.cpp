#include "eivtls/checks.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "eivtls/errors.hpp"
#include "eivtls/subspace.hpp"

namespace eivtls {

namespace {

constexpr double kHoldSlack = 1e-8;

double symmetric_spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& v = es.eigenvalues();
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

}  // namespace

SinBoundCheck check_sin_bound(const ObservationSet& obs, const Truth& truth,
                              const TlsSolution& solution, const ErrorCovariance& cov,
                              const ToleranceConfig& tol) {
  if (truth.a0.rows() != obs.m() || truth.a0.cols() != obs.n() ||
      truth.b0.cols() != obs.d())
    throw DimensionError("check_sin_bound: truth does not match the observations");
  const Eigen::Index k = obs.extended_dim();
  if (cov.dim() != k) throw DimensionError("check_sin_bound: sigma has wrong dimension");

  const Eigen::MatrixXd gram_a0 = gram_matrix(truth.a0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_a0(gram_a0, Eigen::EigenvaluesOnly);
  const double lambda_min = std::max(0.0, es_a0.eigenvalues()(0));
  if (lambda_min <= tol.abs_floor)
    throw SingularScalingError("check_sin_bound: lambda_min(A0^T A0) is numerically zero");

  const Eigen::MatrixXd c0 = truth.c0();
  const Eigen::MatrixXd gram_c0 = gram_matrix(c0);
  const Eigen::MatrixXd nmat =
      gram_c0 + lambda_min * Eigen::MatrixXd::Identity(k, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_n(nmat);
  const Eigen::MatrixXd n_isqrt = es_n.eigenvectors() *
                                  es_n.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                  es_n.eigenvectors().transpose();

  const double m = static_cast<double>(obs.m());
  Eigen::MatrixXd deviation =
      n_isqrt * (gram_matrix(obs.c()) - m * cov.matrix() - gram_c0) * n_isqrt;
  deviation = 0.5 * (deviation + deviation.transpose());

  SinBoundCheck out;
  out.epsilon = symmetric_spectral_norm(deviation);

  const Eigen::MatrixXd x0e = truth.x0_ext();
  out.lhs = canonical_sines(solution.x_ext, x0e, tol).max_sine;
  out.lhs *= out.lhs;

  const SymmetricMatrix xsx(x0e.transpose() * cov.matrix() * x0e);
  if (numerical_rank(xsx.matrix(), tol) < obs.d())
    throw PreconditionError("check_sin_bound: x0_ext^T sigma x0_ext is singular");
  const SymmetricMatrix xx(x0e.transpose() * x0e);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(xx.matrix(), xsx.matrix());
  if (ges.info() != Eigen::Success)
    throw Error("eigensolver_failed", "check_sin_bound: generalized eigensolver failed");
  const double factor = ges.eigenvalues()(obs.d() - 1);

  out.rhs = 2.0 * out.epsilon * (1.0 + symmetric_spectral_norm(cov.matrix()) * factor);
  out.holds = out.lhs <= out.rhs + kHoldSlack;
  return out;
}

PerturbationCheck check_perturbation_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                           const Eigen::MatrixXd& a_tilde,
                                           const Eigen::MatrixXd& x0,
                                           const Eigen::MatrixXd& x_star,
                                           const ToleranceConfig& tol) {
  const Eigen::Index k = a.rows();
  const Eigen::Index d = x0.cols();
  if (a.cols() != k || b.rows() != k || b.cols() != k || a_tilde.rows() != k ||
      a_tilde.cols() != k)
    throw DimensionError("check_perturbation_bound: forms must be square and same size");
  if (x0.rows() != k || x_star.rows() != k || x_star.cols() != d || d < 1 || d >= k)
    throw DimensionError("check_perturbation_bound: coefficient blocks have wrong shape");

  const SymmetricMatrix as(a);
  const SymmetricMatrix bs(b);
  const SymmetricMatrix ts(a_tilde);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_a(as.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& spec_a = es_a.eigenvalues();
  const double norm_a = std::max(std::abs(spec_a(0)), std::abs(spec_a(k - 1)));
  const double slack = tol.psd_slack(k, norm_a);
  if (spec_a(0) < -slack)
    throw PreconditionError("check_perturbation_bound: first form is not PSD");
  const double lambda_next = spec_a(d);
  if (!(lambda_next > slack))
    throw PreconditionError("check_perturbation_bound: eigenvalue d+1 of the first form is zero");
  if ((as.matrix() * x0).norm() > 1e-8 * (1.0 + norm_a) * x0.norm())
    throw PreconditionError("check_perturbation_bound: x0 does not span the kernel");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_b(bs.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& spec_b = es_b.eigenvalues();
  const double norm_b = std::max(std::abs(spec_b(0)), std::abs(spec_b(k - 1)));
  if (spec_b(0) < -tol.psd_slack(k, norm_b))
    throw PreconditionError("check_perturbation_bound: second form is not PSD");

  const SymmetricMatrix xbx(x0.transpose() * bs.matrix() * x0);
  if (numerical_rank(xbx.matrix(), tol) < d)
    throw PreconditionError("check_perturbation_bound: x0^T B x0 is singular");

  PerturbationCheck out;
  out.lhs = canonical_sines(x_star, x0, tol).max_sine;
  out.lhs *= out.lhs;

  const double norm_tilde = symmetric_spectral_norm(ts.matrix());
  if (d == 1) {
    const double xbx0 = xbx.matrix()(0, 0);
    const double star_quad =
        (x_star.transpose() * bs.matrix() * x_star)(0, 0) / x_star.squaredNorm();
    out.rhs = (norm_tilde / lambda_next) * (1.0 + x0.squaredNorm() / xbx0 * star_quad);
  } else {
    const SymmetricMatrix xx(x0.transpose() * x0);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(xx.matrix(), xbx.matrix());
    if (ges.info() != Eigen::Success)
      throw Error("eigensolver_failed", "check_perturbation_bound: generalized eigensolver failed");
    out.rhs = (norm_tilde / lambda_next) * (1.0 + norm_b * ges.eigenvalues()(d - 1));
  }
  out.holds = out.lhs <= out.rhs + kHoldSlack;
  return out;
}

double brute_force_tls(const ObservationSet& obs, const ErrorCovariance& cov,
                       const GridSpec& grid, const ToleranceConfig& tol) {
  if (obs.n() != 1 || obs.d() != 1)
    throw DimensionError("brute_force_tls: grid search handles n = d = 1 only");
  if (!(grid.step > 0.0) || !(grid.hi > grid.lo))
    throw InvalidSpecError("brute_force_tls: malformed grid");

  const Eigen::MatrixXd w = pinv(psd_sqrt(cov.sym(), tol).matrix(), tol);
  const auto points =
      static_cast<long>(std::floor((grid.hi - grid.lo) / grid.step + 0.5)) + 1;

  double best_value = std::numeric_limits<double>::infinity();
  double best_x = std::numeric_limits<double>::quiet_NaN();
  long feasible = 0;
  Eigen::MatrixXd x(2, 1);
  x(1, 0) = -1.0;
  for (long i = 0; i < points; ++i) {
    x(0, 0) = grid.lo + static_cast<double>(i) * grid.step;
    try {
      const Eigen::MatrixXd delta = minimal_correction(obs.c(), cov, x, tol);
      ++feasible;
      const double value = (delta * w).norm();
      if (value < best_value) {
        best_value = value;
        best_x = x(0, 0);
      }
    } catch (const IncompatibleError&) {
      // Infeasible grid point; the scan minimizes over feasible ones.
    }
  }
  if (feasible == 0)
    throw IncompatibleError("brute_force_tls: constraints are incompatible on the whole grid");
  return best_x;
}

}  // namespace eivtls
