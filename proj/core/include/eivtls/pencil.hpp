#pragma once

#include <vector>

#include "eivtls/linalg.hpp"

namespace eivtls {

/// Nonnegative extended real: either a finite value or +infinity kept as
/// an explicit tag.  Infinity is never represented by a large float.
class ExtendedReal {
 public:
  ExtendedReal() = default;

  static ExtendedReal finite(double v);
  static ExtendedReal infinite();

  bool is_infinite() const noexcept { return infinite_; }

  /// Finite value; throws InfiniteEigenvalueError on the infinite tag.
  double value() const;

  double value_or(double fallback) const noexcept { return infinite_ ? fallback : value_; }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Joint diagonalization of a pair of PSD quadratic forms.  The columns
/// u_i of `eigenvectors` form a nonsingular matrix T with
///
///   T^T A T = diag(lambda),   T^T B T = diag(mu),
///
/// equivalently A = (T^-1)^T diag(lambda) T^-1 and likewise for B.  The
/// ratios nu_i = lambda_i / mu_i are reported ascending with the
/// conventions 0/0 -> 0 and lambda > 0, mu = 0 -> +infinity (sorted
/// last).  T itself is not unique; downstream code must only rely on the
/// invariants above.
struct PencilDiagonalization {
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  std::vector<ExtendedReal> nu;
};

/// Factor F with F F^T = B and exactly numerical_rank(B) columns.
Eigen::MatrixXd factor_psd(const SymmetricMatrix& b, const ToleranceConfig& tol = {});

/// Simultaneously diagonalizes the PSD pair (A, B).  The shared kernel of
/// A + B is split off first (those columns carry lambda = mu = 0); on the
/// complement the sum is whitened so lambda_i + mu_i = 1 per column, and
/// values below rel_rank_tol on that unit scale are snapped to exact zero
/// before the nu classification, so near-ties resolve deterministically.
PencilDiagonalization simultaneous_diagonalize(const SymmetricMatrix& a,
                                               const SymmetricMatrix& b,
                                               const ToleranceConfig& tol = {});

/// True iff lambda_min(A + B) > rel_rank_tol * lambda_max(A + B); for PSD
/// pairs this is equivalent to definiteness of the pencil.
bool pencil_definite(const SymmetricMatrix& a, const SymmetricMatrix& b,
                     const ToleranceConfig& tol = {});

/// Largest eigenvalue of V^T (A - nu_i B) V where V holds the first
/// `leading_count` columns of T and i = leading_count.  Should sit at
/// roundoff level for a correct diagonalization; requires nu_i finite.
double variational_residual(const PencilDiagonalization& diag, const SymmetricMatrix& a,
                            const SymmetricMatrix& b, Eigen::Index leading_count);

}  // namespace eivtls
