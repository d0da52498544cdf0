#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eivtls/tls.hpp"

namespace eivtls {

enum class ErrorFamily { kGaussian, kStudentT, kRademacher };

struct ErrorLaw {
  ErrorFamily family = ErrorFamily::kGaussian;
  /// Degrees of freedom for the student t family; must exceed twice the
  /// moment order of the spec so the required moments are finite.
  double student_dof = 0.0;
};

/// Generator for one column of the true regressor block.
struct RegressorColumn {
  enum class Kind { kConstant, kUniform, kGaussian };

  Kind kind = Kind::kConstant;
  double a = 0.0;  // constant value / lower bound / mean
  double b = 0.0;  // unused        / upper bound / standard deviation

  static RegressorColumn constant(double value) { return {Kind::kConstant, value, 0.0}; }
  static RegressorColumn uniform(double lo, double hi) { return {Kind::kUniform, lo, hi}; }
  static RegressorColumn gaussian(double mean, double sd) { return {Kind::kGaussian, mean, sd}; }
};

/// Rule producing the true regressor rows: either per-column generators
/// or an explicit matrix whose leading rows are used verbatim.
struct RegressorLaw {
  std::vector<RegressorColumn> columns;
  std::optional<Eigen::MatrixXd> fixed;
};

/// Complete description of a synthetic errors-in-variables model:
/// true coefficients, regressor rule, error distribution, and the error
/// covariance shape used both to generate and to estimate.
struct ModelSpec {
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  Eigen::MatrixXd x0;
  RegressorLaw regressors;
  ErrorLaw errors;
  ErrorCovariance sigma;
  /// Moment order r the error law must support: draws need finite moments
  /// up to order 2r.
  double moment_order_r = 2.0;

  /// Throws InvalidSpecError on shape mismatches, out-of-range
  /// parameters, or an error law lacking the required moments.
  void validate() const;

  /// (x0; -I), the extended true coefficient matrix.
  Eigen::MatrixXd x0_ext() const;

  /// Whether rank(sigma * x0_ext) == d.  Identifiability of the model
  /// requires this; generation does not, so it is surfaced as a query
  /// instead of a constructor failure.
  bool rank_condition_holds(const ToleranceConfig& tol = {}) const;
};

struct Truth {
  Eigen::MatrixXd a0;
  Eigen::MatrixXd b0;
  Eigen::MatrixXd x0;

  Eigen::MatrixXd c0() const {
    Eigen::MatrixXd out(a0.rows(), a0.cols() + b0.cols());
    out << a0, b0;
    return out;
  }
  Eigen::MatrixXd x0_ext() const;
};

struct Dataset {
  ObservationSet obs;
  Truth truth;
};

/// Draws one dataset of m rows.  Regressor entries are drawn row-major,
/// then one error vector per row as F z_i with F F^T = sigma and z_i
/// i.i.d. standardized coordinates of the spec's family.  Deterministic
/// in (spec, m, seed).
Dataset generate_dataset(const ModelSpec& spec, Eigen::Index m, std::uint64_t seed);

}  // namespace eivtls
