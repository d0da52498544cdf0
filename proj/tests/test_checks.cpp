#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "eivtls/checks.hpp"
#include "eivtls/errors.hpp"
#include "eivtls/sampling.hpp"
#include "test_helpers.hpp"

using namespace eivtls;

namespace {

Eigen::MatrixXd diag3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return Eigen::MatrixXd(v.asDiagonal());
}

}  // namespace

TEST_CASE("angle bound holds trivially on an exactly recovered fit") {
  Sampler sampler(71);
  Eigen::MatrixXd x0(1, 1);
  x0 << 1.3;
  Eigen::MatrixXd a0(20, 1);
  for (Eigen::Index i = 0; i < 20; ++i) a0(i, 0) = sampler.uniform(0.5, 2.0);
  const Eigen::MatrixXd b0 = a0 * x0;
  Eigen::MatrixXd c(20, 2);
  c << a0, b0;

  const ObservationSet obs = ObservationSet::from_joint(c, 1, 1);
  const ErrorCovariance cov{SymmetricMatrix(0.25 * Eigen::MatrixXd::Identity(2, 2))};
  const TlsSolution sol = estimate(obs, cov);
  const Truth truth{a0, b0, x0};
  const SinBoundCheck check = check_sin_bound(obs, truth, sol, cov);
  CHECK(check.lhs <= 1e-12);
  CHECK(check.holds);
  CHECK(check.epsilon > 0.0);  // C^T C deviates from C0^T C0 + m sigma here
}

TEST_CASE("angle bound holds across seeded noisy replicates") {
  Sampler setup(72);
  Eigen::MatrixXd x0(1, 1);
  x0 << 2.0;
  const Eigen::MatrixXd sigma = 0.25 * Eigen::MatrixXd::Identity(2, 2);
  int violations = 0;
  for (int rep = 0; rep < 25; ++rep) {
    Eigen::MatrixXd a0(300, 1);
    for (Eigen::Index i = 0; i < 300; ++i) a0(i, 0) = setup.uniform(0.0, 3.0);
    const Eigen::MatrixXd b0 = a0 * x0;
    Eigen::MatrixXd c(300, 2);
    c << a0, b0;
    for (Eigen::Index i = 0; i < 300; ++i) {
      c(i, 0) += 0.5 * setup.gaussian();
      c(i, 1) += 0.5 * setup.gaussian();
    }
    const ObservationSet obs = ObservationSet::from_joint(c, 1, 1);
    const ErrorCovariance cov{SymmetricMatrix(sigma)};
    const TlsSolution sol = estimate(obs, cov);
    const SinBoundCheck check = check_sin_bound(obs, Truth{a0, b0, x0}, sol, cov);
    if (!check.holds) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("angle bound requires a nonsingular scaling matrix") {
  const Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(4, 1);
  const Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(4, 1);
  Eigen::MatrixXd x0(1, 1);
  x0 << 2.0;
  Eigen::MatrixXd c(4, 2);
  c.setOnes();
  const ObservationSet obs = ObservationSet::from_joint(c, 1, 1);
  const ErrorCovariance cov{SymmetricMatrix::identity(2)};
  TlsSolution sol{};
  sol.x_ext = Eigen::MatrixXd(2, 1);
  sol.x_ext << 2.0, -1.0;
  CHECK_THROWS_AS(check_sin_bound(obs, Truth{a0, b0, x0}, sol, cov), SingularScalingError);
}

TEST_CASE("angle bound requires sigma to act on the true coefficient span") {
  Sampler sampler(73);
  Eigen::MatrixXd x0(1, 1);
  x0 << 0.0;
  Eigen::MatrixXd a0(10, 1);
  for (Eigen::Index i = 0; i < 10; ++i) a0(i, 0) = sampler.uniform(0.5, 2.0);
  const Eigen::MatrixXd b0 = a0 * x0;
  Eigen::MatrixXd c(10, 2);
  c << a0, b0;
  const ObservationSet obs = ObservationSet::from_joint(c, 1, 1);
  // sigma = diag(1, 0) and x0_ext = (0, -1): sigma x0_ext = 0.
  Eigen::VectorXd diag(2);
  diag << 1.0, 0.0;
  const ErrorCovariance cov{SymmetricMatrix(Eigen::MatrixXd(diag.asDiagonal()))};
  TlsSolution sol{};
  sol.x_ext = Eigen::MatrixXd(2, 1);
  sol.x_ext << 0.0, -1.0;
  CHECK_THROWS_AS(check_sin_bound(obs, Truth{a0, b0, x0}, sol, cov), PreconditionError);
}

TEST_CASE("perturbation bound with zero perturbation and the exact kernel") {
  const Eigen::MatrixXd a = diag3(0.0, 1.0, 2.0);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(3, 1);
  x0(0, 0) = 1.0;
  const PerturbationCheck check =
      check_perturbation_bound(a, b, Eigen::MatrixXd::Zero(3, 3), x0, x0);
  CHECK(check.lhs <= 1e-12);
  CHECK(check.rhs <= 1e-12);
  CHECK(check.holds);
}

TEST_CASE("perturbation bound enforces its spectral preconditions") {
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(3, 1);
  x0(0, 0) = 1.0;
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);

  // Kernel too large: eigenvalue d+1 vanishes.
  CHECK_THROWS_AS(
      check_perturbation_bound(diag3(0.0, 0.0, 1.0), Eigen::MatrixXd::Identity(3, 3), zero, x0, x0),
      PreconditionError);
  // x0 not in the kernel.
  CHECK_THROWS_AS(
      check_perturbation_bound(diag3(1.0, 2.0, 3.0), Eigen::MatrixXd::Identity(3, 3), zero, x0, x0),
      PreconditionError);
  // x0^T B x0 singular.
  CHECK_THROWS_AS(
      check_perturbation_bound(diag3(0.0, 1.0, 2.0), diag3(0.0, 1.0, 1.0), zero, x0, x0),
      PreconditionError);
}

TEST_CASE("perturbation bound holds on a random positive definite sweep") {
  Sampler sampler(74);
  const Eigen::Index k = 5;
  int violations = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd x0 = random_orthonormal(sampler, k, 1);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x0);
    const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd comp = full.rightCols(k - 1);
    Eigen::VectorXd vals(k - 1);
    for (Eigen::Index i = 0; i < k - 1; ++i) vals(i) = sampler.uniform(0.5, 2.0);
    const Eigen::MatrixXd a = comp * vals.asDiagonal() * comp.transpose();

    const Eigen::MatrixXd braw = random_psd(sampler, k, k).matrix();
    const Eigen::MatrixXd b =
        braw + 0.1 * Eigen::MatrixXd::Identity(k, k) * (1.0 + braw.trace() / k);
    Eigen::MatrixXd tilde = gaussian_matrix(sampler, k, k);
    tilde = 0.5 * (tilde + tilde.transpose());
    tilde *= 0.01 * vals.minCoeff() / spectral_norm(tilde);

    Eigen::MatrixXd sym = a + tilde;
    sym = 0.5 * (sym + sym.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sym, b);
    REQUIRE(ges.info() == Eigen::Success);
    const Eigen::MatrixXd x_star = ges.eigenvectors().leftCols(1);

    const PerturbationCheck check = check_perturbation_bound(a, b, tilde, x0, x_star);
    if (!check.holds) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("grid search finds the exact coefficient of a noiseless relation") {
  Eigen::MatrixXd a(3, 1), b(3, 1);
  a << 1.0, 2.0, 3.0;
  b = 2.0 * a;
  const ObservationSet obs{a, b};
  const ErrorCovariance cov{SymmetricMatrix::identity(2)};
  const double found = brute_force_tls(obs, cov, GridSpec{-5.0, 5.0, 1e-3});
  CHECK(found == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("grid search agrees with the pencil estimator on noisy data") {
  Sampler sampler(75);
  const Eigen::MatrixXd c =
      testutil::noisy_joint(sampler, 25, 1.4, Eigen::MatrixXd::Identity(2, 2), 0.3);
  const ObservationSet obs = ObservationSet::from_joint(c, 1, 1);
  const ErrorCovariance cov{SymmetricMatrix::identity(2)};
  const GridSpec grid{-5.0, 5.0, 1e-3};
  const TlsSolution sol = estimate(obs, cov);
  const double found = brute_force_tls(obs, cov, grid);
  CHECK(std::abs(found - sol.x_hat(0, 0)) <= 2.0 * grid.step);
}

TEST_CASE("grid search validates its inputs") {
  Sampler sampler(76);
  const ErrorCovariance cov{SymmetricMatrix::identity(3)};
  const ObservationSet wide{gaussian_matrix(sampler, 5, 2), gaussian_matrix(sampler, 5, 1)};
  CHECK_THROWS_AS(brute_force_tls(wide, cov, GridSpec{}), DimensionError);

  const ObservationSet scalar{gaussian_matrix(sampler, 5, 1), gaussian_matrix(sampler, 5, 1)};
  const ErrorCovariance cov2{SymmetricMatrix::identity(2)};
  CHECK_THROWS_AS(brute_force_tls(scalar, cov2, GridSpec{1.0, -1.0, 1e-3}), InvalidSpecError);
  CHECK_THROWS_AS(brute_force_tls(scalar, cov2, GridSpec{-1.0, 1.0, 0.0}), InvalidSpecError);
}

TEST_CASE("grid search reports infeasibility when no point admits a correction") {
  Eigen::MatrixXd a(3, 1), b(3, 1);
  a << 1.0, 2.0, 3.0;
  b << 1.0, 3.0, 7.0;
  const ObservationSet obs{a, b};
  const ErrorCovariance zero{SymmetricMatrix::zero(2)};
  CHECK_THROWS_AS(brute_force_tls(obs, zero, GridSpec{-5.0, 5.0, 0.25}), IncompatibleError);
}
