#include "eivtls/sampling.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "eivtls/errors.hpp"

namespace eivtls {

double Sampler::gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // Box-Muller; u is kept away from zero so the log is finite.
  double u = 0.0;
  do {
    u = uniform01();
  } while (u <= 0.0);
  const double v = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * M_PI * v;
  cached_gaussian_ = radius * std::sin(angle);
  has_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

double Sampler::gamma(double shape) {
  if (!(shape >= 1.0)) throw InvalidSpecError("gamma sampler requires shape >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Sampler::student_t_standardized(double dof) {
  if (!(dof > 2.0)) throw InvalidSpecError("student t sampler requires dof > 2");
  const double z = gaussian();
  const double chi2 = 2.0 * gamma(dof / 2.0);
  const double t = z / std::sqrt(chi2 / dof);
  return t * std::sqrt((dof - 2.0) / dof);
}

Eigen::MatrixXd gaussian_matrix(Sampler& sampler, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = sampler.gaussian();
  return m;
}

SymmetricMatrix random_psd(Sampler& sampler, Eigen::Index dim, Eigen::Index rank) {
  if (rank < 0 || rank > dim) throw InvalidSpecError("random_psd: rank out of range");
  if (rank == 0) return SymmetricMatrix::zero(dim);
  const Eigen::MatrixXd f = gaussian_matrix(sampler, dim, rank);
  return SymmetricMatrix(f * f.transpose());
}

Eigen::MatrixXd random_orthonormal(Sampler& sampler, Eigen::Index rows, Eigen::Index cols) {
  if (cols > rows) throw InvalidSpecError("random_orthonormal: more columns than rows");
  const Eigen::MatrixXd g = gaussian_matrix(sampler, rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

}  // namespace eivtls
