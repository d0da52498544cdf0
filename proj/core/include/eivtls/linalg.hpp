#pragma once

#include <Eigen/Core>

#include "eivtls/tolerance.hpp"

namespace eivtls {

/// Dense symmetric matrix.  Construction symmetrizes the input as
/// (M + M^T) / 2, so entries(i, j) == entries(j, i) holds exactly
/// afterwards and spectral routines can rely on it.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const Eigen::MatrixXd& m);

  static SymmetricMatrix identity(Eigen::Index dim);
  static SymmetricMatrix zero(Eigen::Index dim);

  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }

 private:
  Eigen::MatrixXd entries_;
};

/// Moore-Penrose pseudoinverse.  Singular values below
/// max(rel_rank_tol * sigma_max, abs_floor) are treated as exactly zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& m, const ToleranceConfig& tol = {});

/// Number of singular values at or above the rank cutoff.
Eigen::Index numerical_rank(const Eigen::MatrixXd& m, const ToleranceConfig& tol = {});

/// Orthogonal projector onto the range of a PSD matrix.
SymmetricMatrix projector(const SymmetricMatrix& s, const ToleranceConfig& tol = {});

/// Symmetric PSD square root.  Negative eigenvalues within the PSD slack
/// are clipped to zero; anything lower throws NotPsdError.
SymmetricMatrix psd_sqrt(const SymmetricMatrix& s, const ToleranceConfig& tol = {});

/// C^T C accumulated in extended precision, rounded to double at the end.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& c);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

/// Eigendecomposition of a symmetric matrix required to be PSD within
/// tolerance.  Eigenvalues are ascending; negatives inside the slack are
/// clipped to zero, anything lower throws NotPsdError.
struct PsdEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
PsdEigen psd_eigendecompose(const SymmetricMatrix& s, const ToleranceConfig& tol = {});

}  // namespace eivtls
