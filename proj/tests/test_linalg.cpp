#include <doctest.h>

#include <Eigen/Dense>

#include "eivtls/errors.hpp"
#include "eivtls/linalg.hpp"
#include "eivtls/sampling.hpp"

using namespace eivtls;

TEST_CASE("symmetric matrix construction symmetrizes exactly") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 4.0, 3.0;
  const SymmetricMatrix s(m);
  CHECK(s.matrix()(0, 1) == s.matrix()(1, 0));
  CHECK(s.matrix()(0, 1) == doctest::Approx(3.0));

  Eigen::MatrixXd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(SymmetricMatrix{bad}, DimensionError);

  Eigen::MatrixXd nan_m = Eigen::MatrixXd::Zero(2, 2);
  nan_m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymmetricMatrix{nan_m}, NonFiniteError);
}

TEST_CASE("pinv satisfies the Penrose identities") {
  Sampler sampler(11);
  for (int rep = 0; rep < 20; ++rep) {
    // Mix full-rank and rank-deficient shapes.
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(sampler.next_u64() % 4);
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(sampler.next_u64() % 3);
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(sampler.next_u64() %
                                                         static_cast<std::uint64_t>(std::min(m, n)));
    const Eigen::MatrixXd a =
        gaussian_matrix(sampler, m, r) * gaussian_matrix(sampler, r, n);
    const Eigen::MatrixXd p = pinv(a);
    const double scale = 1e-10 * (1.0 + a.norm() + p.norm());
    CHECK((a * p * a - a).norm() <= scale);
    CHECK((p * a * p - p).norm() <= scale);
    CHECK((a * p - (a * p).transpose()).norm() <= scale);
    CHECK((p * a - (p * a).transpose()).norm() <= scale);
  }
}

TEST_CASE("pinv of a diagonal matrix inverts the nonzero entries") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 2.0;
  const Eigen::MatrixXd p = pinv(d);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == 0.0);
  CHECK(pinv(Eigen::MatrixXd::Zero(3, 2)).isZero(0.0));
}

TEST_CASE("numerical rank uses a relative cutoff") {
  Eigen::VectorXd v(3);
  v << 1.0, 1e-3, 1e-20;
  CHECK(numerical_rank(Eigen::MatrixXd(v.asDiagonal())) == 2);
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 4)) == 4);

  // A tight explicit tolerance overrides the default.
  ToleranceConfig tol{};
  tol.rel_rank_tol = 1e-2;
  CHECK(numerical_rank(Eigen::MatrixXd(v.asDiagonal()), tol) == 1);
}

TEST_CASE("projector reproduces PSD matrices on their range") {
  Sampler sampler(12);
  const SymmetricMatrix s = random_psd(sampler, 5, 2);
  const SymmetricMatrix p = projector(s);
  CHECK((p.matrix() * p.matrix() - p.matrix()).norm() <= 1e-12);
  CHECK((p.matrix() * s.matrix() - s.matrix()).norm() <= 1e-10 * (1.0 + s.matrix().norm()));
  CHECK(numerical_rank(p.matrix()) == 2);
}

TEST_CASE("psd_sqrt squares back to the input") {
  Eigen::VectorXd v(2);
  v << 4.0, 9.0;
  const SymmetricMatrix r = psd_sqrt(SymmetricMatrix(Eigen::MatrixXd(v.asDiagonal())));
  CHECK(r.matrix()(0, 0) == doctest::Approx(2.0));
  CHECK(r.matrix()(1, 1) == doctest::Approx(3.0));

  Sampler sampler(13);
  const SymmetricMatrix s = random_psd(sampler, 6, 4);
  const SymmetricMatrix root = psd_sqrt(s);
  CHECK((root.matrix() * root.matrix() - s.matrix()).norm() <=
        1e-10 * (1.0 + s.matrix().norm()));
}

TEST_CASE("psd eigendecomposition clips roundoff negatives and rejects real ones") {
  Eigen::VectorXd v(2);
  v << 1.0, -1e-17;
  const PsdEigen eig = psd_eigendecompose(SymmetricMatrix(Eigen::MatrixXd(v.asDiagonal())));
  CHECK(eig.values(0) == 0.0);
  CHECK(eig.values(1) == doctest::Approx(1.0));

  Eigen::VectorXd w(2);
  w << 1.0, -1e-3;
  CHECK_THROWS_AS(psd_eigendecompose(SymmetricMatrix(Eigen::MatrixXd(w.asDiagonal()))),
                  NotPsdError);
}

TEST_CASE("gram matrix matches the direct product and is exactly symmetric") {
  Sampler sampler(14);
  const Eigen::MatrixXd c = gaussian_matrix(sampler, 50, 4);
  const Eigen::MatrixXd g = gram_matrix(c);
  CHECK((g - c.transpose() * c).norm() <= 1e-12 * (1.0 + c.squaredNorm()));
  CHECK(g == g.transpose());
}

TEST_CASE("spectral norm is the largest singular value") {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 2.0, 0.0, 0.0;
  CHECK(spectral_norm(m) == doctest::Approx(2.0));
  Eigen::MatrixXd d(2, 2);
  d << 3.0, 0.0, 0.0, -4.0;
  CHECK(spectral_norm(d) == doctest::Approx(4.0));
}

TEST_CASE("tolerance validation rejects nonsensical settings") {
  ToleranceConfig tol{};
  tol.gap_rtol = -1.0;
  CHECK_THROWS_AS(tol.validate(), InvalidSpecError);
  ToleranceConfig tol2{};
  tol2.rel_rank_tol = -0.5;
  CHECK_THROWS_AS(tol2.validate(), InvalidSpecError);
}
