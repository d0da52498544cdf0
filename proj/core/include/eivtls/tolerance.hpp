#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <limits>
#include <optional>

namespace eivtls {

/// Shared tolerance policy for rank decisions, PSD acceptance and
/// eigenvalue-gap classification.  All estimator and diagnostic entry
/// points take one of these; a default-constructed config gives the
/// documented defaults.
struct ToleranceConfig {
  /// Relative cutoff under which singular values are treated as zero.
  /// When unset, the effective cutoff is max(rows, cols) * eps * 32,
  /// chosen per matrix.
  std::optional<double> rel_rank_tol{};

  /// Absolute floor: singular values below this never count toward rank,
  /// whatever the relative rule says.
  double abs_floor = 1e-300;

  /// Relative threshold deciding whether the eigenvalue separation behind
  /// a minimizer is wide enough to call it unique.
  double gap_rtol = 1e-8;

  double rank_rel(Eigen::Index rows, Eigen::Index cols) const {
    if (rel_rank_tol) return *rel_rank_tol;
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon() * 32.0;
  }

  /// Slack for PSD acceptance: eigenvalues above -slack are accepted and
  /// clipped to zero.  The relative term keeps matrices that are PSD up
  /// to roundoff from being rejected.
  double psd_slack(Eigen::Index dim, double spectral_norm) const {
    return std::max(abs_floor * (1.0 + spectral_norm), rank_rel(dim, dim) * spectral_norm);
  }

  /// Throws InvalidSpecError when a field is out of its documented range.
  void validate() const;
};

}  // namespace eivtls
