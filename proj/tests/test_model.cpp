#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "eivtls/errors.hpp"
#include "eivtls/model.hpp"
#include "eivtls/sampling.hpp"

using namespace eivtls;

namespace {

ModelSpec intercept_spec() {
  Eigen::MatrixXd x0(2, 1);
  x0 << 1.0, 2.0;
  Eigen::VectorXd diag(3);
  diag << 0.0, 0.25, 0.25;
  return ModelSpec{2,
                   1,
                   x0,
                   RegressorLaw{{RegressorColumn::constant(1.0),
                                 RegressorColumn::uniform(0.0, 3.0)},
                                std::nullopt},
                   ErrorLaw{ErrorFamily::kGaussian, 0.0},
                   ErrorCovariance{SymmetricMatrix(Eigen::MatrixXd(diag.asDiagonal()))},
                   2.0};
}

}  // namespace

TEST_CASE("seed mixing matches the frozen reference values") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
  CHECK(splitmix64(42) == 0xbdd732262feb6e95ull);
  CHECK(mix_seed(0, 0, 0) == 0x238275bc38fcbe91ull);
  CHECK(mix_seed(1, 0, 0) == 0xb18a02f46d8d86c3ull);
  CHECK(mix_seed(20260819, 100, 0) == 0xb76855d1a17365a6ull);
  CHECK(mix_seed(20260819, 100, 1) == 0x96dbc485b3f3f04bull);
  CHECK(mix_seed(20260819, 10000, 199) == 0x63c94af89b449fcbull);
  CHECK(mix_seed(7, 1000, 42) == 0x6d7424cfc930e0d7ull);
}

TEST_CASE("sampler transforms have the advertised moments") {
  Sampler sampler(61);
  const int draws = 40000;

  double usum = 0.0, umin = 1.0, umax = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double u = sampler.uniform01();
    usum += u;
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  CHECK(usum / draws == doctest::Approx(0.5).epsilon(0.02));
  CHECK(umin >= 0.0);
  CHECK(umax < 1.0);

  double gsum = 0.0, gsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double g = sampler.gaussian();
    gsum += g;
    gsq += g * g;
  }
  CHECK(gsum / draws == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
  CHECK(gsq / draws == doctest::Approx(1.0).epsilon(0.03));

  double gamma_sum = 0.0;
  for (int i = 0; i < draws; ++i) gamma_sum += sampler.gamma(3.0);
  CHECK(gamma_sum / draws == doctest::Approx(3.0).epsilon(0.03));

  double tsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double t = sampler.student_t_standardized(9.0);
    tsq += t * t;
  }
  CHECK(tsq / draws == doctest::Approx(1.0).epsilon(0.05));

  double rsum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double r = sampler.rademacher();
    CHECK(std::abs(r) == 1.0);
    rsum += r;
  }
  CHECK(std::abs(rsum) / draws <= 0.02);
}

TEST_CASE("dataset generation is a pure function of spec, size, and seed") {
  const ModelSpec spec = intercept_spec();
  const Dataset a = generate_dataset(spec, 40, 123);
  const Dataset b = generate_dataset(spec, 40, 123);
  CHECK(a.obs.c() == b.obs.c());
  CHECK(a.truth.a0 == b.truth.a0);

  const Dataset c = generate_dataset(spec, 40, 124);
  CHECK((a.obs.c() - c.obs.c()).norm() > 1e-6);
}

TEST_CASE("generated data respects the model structure") {
  const ModelSpec spec = intercept_spec();
  const Dataset data = generate_dataset(spec, 200, 7);
  CHECK(data.obs.m() == 200);
  CHECK(data.obs.n() == 2);
  CHECK(data.obs.d() == 1);
  // Exact relation in the truth block.
  CHECK((data.truth.b0 - data.truth.a0 * data.truth.x0).norm() <= 1e-12);
  // The error-free intercept column is observed without noise.
  CHECK((data.obs.c().col(0) - data.truth.a0.col(0)).norm() == 0.0);
  // Uniform regressor stays inside its support.
  CHECK(data.truth.a0.col(1).minCoeff() >= 0.0);
  CHECK(data.truth.a0.col(1).maxCoeff() <= 3.0);
}

TEST_CASE("zero covariance generates exactly noiseless observations") {
  Eigen::MatrixXd x0(1, 1);
  x0 << 2.0;
  const ModelSpec spec{1,
                       1,
                       x0,
                       RegressorLaw{{RegressorColumn::uniform(0.0, 3.0)}, std::nullopt},
                       ErrorLaw{ErrorFamily::kGaussian, 0.0},
                       ErrorCovariance{SymmetricMatrix::zero(2)},
                       2.0};
  const Dataset data = generate_dataset(spec, 50, 9);
  CHECK(data.obs.c() == data.truth.c0());
}

TEST_CASE("empirical error covariance converges to sigma") {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 0.25, 0.10, 0.10, 0.50;
  Eigen::MatrixXd x0(1, 1);
  x0 << 1.0;
  for (ErrorFamily family :
       {ErrorFamily::kGaussian, ErrorFamily::kStudentT, ErrorFamily::kRademacher}) {
    const ModelSpec spec{1,
                         1,
                         x0,
                         RegressorLaw{{RegressorColumn::gaussian(0.0, 1.0)}, std::nullopt},
                         ErrorLaw{family, family == ErrorFamily::kStudentT ? 9.0 : 0.0},
                         ErrorCovariance{SymmetricMatrix(sigma)},
                         2.0};
    const Eigen::Index m = 100000;
    const Dataset data = generate_dataset(spec, m, 17);
    const Eigen::MatrixXd noise = data.obs.c() - data.truth.c0();
    const Eigen::MatrixXd empirical = noise.transpose() * noise / static_cast<double>(m);
    CHECK((empirical - sigma).norm() <= 0.05 * sigma.norm());
    CHECK(std::abs(noise.col(0).mean()) <= 0.01);
  }
}

TEST_CASE("spec validation rejects malformed models") {
  ModelSpec spec = intercept_spec();
  spec.x0 = Eigen::MatrixXd::Zero(3, 1);
  CHECK_THROWS_AS(spec.validate(), InvalidSpecError);

  ModelSpec bad_uniform = intercept_spec();
  bad_uniform.regressors.columns[1] = RegressorColumn::uniform(3.0, 0.0);
  CHECK_THROWS_AS(bad_uniform.validate(), InvalidSpecError);

  ModelSpec bad_sd = intercept_spec();
  bad_sd.regressors.columns[1] = RegressorColumn::gaussian(0.0, -1.0);
  CHECK_THROWS_AS(bad_sd.validate(), InvalidSpecError);

  ModelSpec wrong_cols = intercept_spec();
  wrong_cols.regressors.columns.pop_back();
  CHECK_THROWS_AS(wrong_cols.validate(), InvalidSpecError);

  // The student t family needs dof > 2r for finite moments of order 2r.
  ModelSpec heavy = intercept_spec();
  heavy.errors = ErrorLaw{ErrorFamily::kStudentT, 4.0};
  heavy.moment_order_r = 2.0;
  CHECK_THROWS_AS(heavy.validate(), InvalidSpecError);
  heavy.errors.student_dof = 4.1;
  CHECK_NOTHROW(heavy.validate());

  ModelSpec bad_order = intercept_spec();
  bad_order.moment_order_r = 0.5;
  CHECK_THROWS_AS(bad_order.validate(), InvalidSpecError);
}

TEST_CASE("fixed regressor matrices are used verbatim and must be long enough") {
  Eigen::MatrixXd fixed(4, 1);
  fixed << 1.0, 2.0, 3.0, 4.0;
  Eigen::MatrixXd x0(1, 1);
  x0 << 0.5;
  const ModelSpec spec{1,
                       1,
                       x0,
                       RegressorLaw{{}, fixed},
                       ErrorLaw{ErrorFamily::kGaussian, 0.0},
                       ErrorCovariance{SymmetricMatrix::zero(2)},
                       2.0};
  const Dataset data = generate_dataset(spec, 3, 1);
  CHECK(data.truth.a0 == fixed.topRows(3));
  CHECK_THROWS_AS(generate_dataset(spec, 5, 1), InvalidSpecError);
}

TEST_CASE("identifiability of the covariance direction is a queryable condition") {
  const ModelSpec spec = intercept_spec();
  CHECK(spec.rank_condition_holds());

  ModelSpec blind = intercept_spec();
  Eigen::VectorXd diag(3);
  diag << 1.0, 0.0, 0.0;
  blind.sigma = ErrorCovariance{SymmetricMatrix(Eigen::MatrixXd(diag.asDiagonal()))};
  blind.x0 << 0.0, 2.0;  // sigma * x0_ext = 0
  CHECK(!blind.rank_condition_holds());
}

TEST_CASE("extended coefficient blocks stack the negated identity") {
  const ModelSpec spec = intercept_spec();
  const Eigen::MatrixXd ext = spec.x0_ext();
  CHECK(ext.rows() == 3);
  CHECK(ext.cols() == 1);
  CHECK(ext(0, 0) == 1.0);
  CHECK(ext(1, 0) == 2.0);
  CHECK(ext(2, 0) == -1.0);
}
