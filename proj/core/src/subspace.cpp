#include "eivtls/subspace.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "eivtls/errors.hpp"
#include "eivtls/linalg.hpp"

namespace eivtls {

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  return qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
}

}  // namespace

SubspaceAngles canonical_sines(const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2,
                               const ToleranceConfig& tol) {
  if (x1.rows() != x2.rows())
    throw DimensionError("canonical_sines: bases live in different ambient spaces");
  if (x1.cols() < 1 || x2.cols() < 1)
    throw DimensionError("canonical_sines: empty basis");
  if (x1.cols() > x2.cols())
    throw DimensionError("canonical_sines: first span must not have larger dimension");
  if (numerical_rank(x1, tol) < x1.cols())
    throw RankDeficientError("canonical_sines: first basis is rank deficient");
  if (numerical_rank(x2, tol) < x2.cols())
    throw RankDeficientError("canonical_sines: second basis is rank deficient");

  const Eigen::MatrixXd q1 = orthonormal_basis(x1);
  const Eigen::MatrixXd q2 = orthonormal_basis(x2);
  const Eigen::MatrixXd rejected = q1 - q2 * (q2.transpose() * q1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rejected);
  const Eigen::VectorXd& sv = svd.singularValues();

  SubspaceAngles out;
  out.sines.reserve(static_cast<std::size_t>(sv.size()));
  constexpr double kClipSlack = 1e-12;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double s = sv(i);
    if (s < -kClipSlack || s > 1.0 + kClipSlack)
      throw Error("sine_out_of_range",
                  "canonical sine " + std::to_string(s) + " outside [0, 1] beyond slack");
    out.sines.push_back(std::min(std::max(s, 0.0), 1.0));
  }
  out.max_sine = out.sines.empty() ? 0.0 : out.sines.front();
  return out;
}

double xhat_error_bound(double max_sine, double x0_norm) {
  const double s = std::max(max_sine, 0.0);
  const double q = 1.0 + x0_norm * x0_norm;
  if (!(q * s * s < 1.0)) return std::numeric_limits<double>::infinity();
  const double c = std::sqrt(1.0 - s * s);
  return q * (x0_norm * s * s + s * c) / (1.0 - q * s * s);
}

}  // namespace eivtls
