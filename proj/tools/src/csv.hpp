#pragma once

#include <Eigen/Dense>
#include <string>

namespace eivtls::cli {

// Reads a comma-separated numeric matrix. A single leading header row is
// skipped when its first token does not parse as a number. Decimal point
// only; no locale handling.
Eigen::MatrixXd read_csv_matrix(const std::string& path);

}  // namespace eivtls::cli
