#include "eivtls/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "eivtls/errors.hpp"

namespace eivtls {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw NonFiniteError(std::string(what) + ": non-finite entries");
}

}  // namespace

void ToleranceConfig::validate() const {
  if (rel_rank_tol && !(*rel_rank_tol > 0.0 && *rel_rank_tol < 1.0))
    throw InvalidSpecError("rel_rank_tol must lie in (0, 1)");
  if (!(abs_floor > 0.0)) throw InvalidSpecError("abs_floor must be positive");
  if (!(gap_rtol > 0.0)) throw InvalidSpecError("gap_rtol must be positive");
}

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("SymmetricMatrix: input must be square");
  require_finite(m, "SymmetricMatrix");
  entries_ = 0.5 * (m + m.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  return SymmetricMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymmetricMatrix SymmetricMatrix::zero(Eigen::Index dim) {
  return SymmetricMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& m, const ToleranceConfig& tol) {
  require_finite(m, "pinv");
  if (m.size() == 0) return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = std::max(tol.rank_rel(m.rows(), m.cols()) * sv(0), tol.abs_floor);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= cutoff) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, const ToleranceConfig& tol) {
  require_finite(m, "numerical_rank");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = std::max(tol.rank_rel(m.rows(), m.cols()) * sv(0), tol.abs_floor);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= cutoff) ++rank;
  return rank;
}

PsdEigen psd_eigendecompose(const SymmetricMatrix& s, const ToleranceConfig& tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix());
  if (es.info() != Eigen::Success)
    throw Error("eigensolver_failed", "symmetric eigendecomposition did not converge");
  Eigen::VectorXd values = es.eigenvalues();
  const Eigen::Index k = values.size();
  if (k > 0) {
    const double norm = std::max(std::abs(values(0)), std::abs(values(k - 1)));
    const double slack = tol.psd_slack(k, norm);
    if (values(0) < -slack)
      throw NotPsdError("matrix is not positive semidefinite: min eigenvalue " +
                        std::to_string(values(0)));
    values = values.cwiseMax(0.0);
  }
  return {values, es.eigenvectors()};
}

SymmetricMatrix projector(const SymmetricMatrix& s, const ToleranceConfig& tol) {
  PsdEigen eig = psd_eigendecompose(s, tol);
  const Eigen::Index k = s.dim();
  const double lmax = k > 0 ? eig.values(k - 1) : 0.0;
  const double cutoff = std::max(tol.rank_rel(k, k) * lmax, tol.abs_floor);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    if (eig.values(i) >= cutoff) p += eig.vectors.col(i) * eig.vectors.col(i).transpose();
  return SymmetricMatrix(p);
}

SymmetricMatrix psd_sqrt(const SymmetricMatrix& s, const ToleranceConfig& tol) {
  PsdEigen eig = psd_eigendecompose(s, tol);
  Eigen::MatrixXd r =
      eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.transpose();
  return SymmetricMatrix(r);
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& c) {
  require_finite(c, "gram_matrix");
  const Eigen::Index m = c.rows();
  const Eigen::Index k = c.cols();
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index l = j; l < k; ++l) {
      long double acc = 0.0L;
      for (Eigen::Index i = 0; i < m; ++i)
        acc += static_cast<long double>(c(i, j)) * static_cast<long double>(c(i, l));
      g(j, l) = static_cast<double>(acc);
      g(l, j) = g(j, l);
    }
  }
  return g;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace eivtls
