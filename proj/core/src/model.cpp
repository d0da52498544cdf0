#include "eivtls/model.hpp"

#include <cmath>

#include "eivtls/errors.hpp"
#include "eivtls/pencil.hpp"
#include "eivtls/sampling.hpp"

namespace eivtls {

void ModelSpec::validate() const {
  if (n < 1 || d < 1) throw InvalidSpecError("model: need n >= 1 and d >= 1");
  if (x0.rows() != n || x0.cols() != d) throw InvalidSpecError("model: x0 must be n x d");
  if (!x0.allFinite()) throw InvalidSpecError("model: x0 has non-finite entries");
  if (sigma.dim() != n + d) throw InvalidSpecError("model: sigma must be (n + d) x (n + d)");
  if (!(moment_order_r >= 1.0)) throw InvalidSpecError("model: moment_order_r must be >= 1");

  if (errors.family == ErrorFamily::kStudentT) {
    // Finite moments up to order 2r require dof strictly above 2r.
    if (!(errors.student_dof > 2.0 * moment_order_r))
      throw InvalidSpecError("model: student t dof must exceed 2 * moment_order_r");
  }

  if (regressors.fixed) {
    if (regressors.fixed->cols() != n)
      throw InvalidSpecError("model: fixed regressor matrix must have n columns");
    if (!regressors.fixed->allFinite())
      throw InvalidSpecError("model: fixed regressor matrix has non-finite entries");
  } else {
    if (static_cast<Eigen::Index>(regressors.columns.size()) != n)
      throw InvalidSpecError("model: need one regressor column rule per column");
    for (const RegressorColumn& col : regressors.columns) {
      switch (col.kind) {
        case RegressorColumn::Kind::kConstant:
          break;
        case RegressorColumn::Kind::kUniform:
          if (!(col.b > col.a)) throw InvalidSpecError("model: uniform column needs hi > lo");
          break;
        case RegressorColumn::Kind::kGaussian:
          if (!(col.b >= 0.0))
            throw InvalidSpecError("model: gaussian column needs a nonnegative sd");
          break;
      }
    }
  }
}

Eigen::MatrixXd ModelSpec::x0_ext() const {
  Eigen::MatrixXd ext(n + d, d);
  ext.topRows(n) = x0;
  ext.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
  return ext;
}

bool ModelSpec::rank_condition_holds(const ToleranceConfig& tol) const {
  return numerical_rank(sigma.matrix() * x0_ext(), tol) == d;
}

Eigen::MatrixXd Truth::x0_ext() const {
  const Eigen::Index n = x0.rows();
  const Eigen::Index d = x0.cols();
  Eigen::MatrixXd ext(n + d, d);
  ext.topRows(n) = x0;
  ext.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
  return ext;
}

Dataset generate_dataset(const ModelSpec& spec, Eigen::Index m, std::uint64_t seed) {
  spec.validate();
  if (m < 1) throw InvalidSpecError("generate_dataset: need m >= 1");

  Sampler sampler(seed);

  Eigen::MatrixXd a0(m, spec.n);
  if (spec.regressors.fixed) {
    if (spec.regressors.fixed->rows() < m)
      throw InvalidSpecError("generate_dataset: fixed regressor matrix has too few rows");
    a0 = spec.regressors.fixed->topRows(m);
  } else {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < spec.n; ++j) {
        const RegressorColumn& col = spec.regressors.columns[static_cast<std::size_t>(j)];
        switch (col.kind) {
          case RegressorColumn::Kind::kConstant:
            a0(i, j) = col.a;
            break;
          case RegressorColumn::Kind::kUniform:
            a0(i, j) = sampler.uniform(col.a, col.b);
            break;
          case RegressorColumn::Kind::kGaussian:
            a0(i, j) = col.a + col.b * sampler.gaussian();
            break;
        }
      }
    }
  }

  const Eigen::MatrixXd b0 = a0 * spec.x0;

  // Errors are F z with F F^T = sigma, so zero-variance coordinates stay
  // exactly error-free (their rows of F vanish).
  const Eigen::MatrixXd f = factor_psd(spec.sigma.sym());
  const Eigen::Index rank = f.cols();

  Eigen::MatrixXd c(m, spec.n + spec.d);
  c.leftCols(spec.n) = a0;
  c.rightCols(spec.d) = b0;
  if (rank > 0) {
    Eigen::VectorXd z(rank);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index t = 0; t < rank; ++t) {
        switch (spec.errors.family) {
          case ErrorFamily::kGaussian:
            z(t) = sampler.gaussian();
            break;
          case ErrorFamily::kStudentT:
            z(t) = sampler.student_t_standardized(spec.errors.student_dof);
            break;
          case ErrorFamily::kRademacher:
            z(t) = sampler.rademacher();
            break;
        }
      }
      c.row(i) += (f * z).transpose();
    }
  }

  return Dataset{ObservationSet::from_joint(c, spec.n, spec.d), Truth{a0, b0, spec.x0}};
}

}  // namespace eivtls
