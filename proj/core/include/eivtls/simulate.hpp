#pragma once

#include <cstdint>
#include <vector>

#include "eivtls/checks.hpp"
#include "eivtls/model.hpp"

namespace eivtls {

struct RunOptions {
  /// Worker threads for the replicate fan-out; 0 picks the hardware
  /// concurrency.  Results do not depend on this value.
  int threads = 0;
  ToleranceConfig tol{};
};

/// Interpolated quantiles of a sample; NaN when the sample is empty.
struct QuantileSummary {
  double q10 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
  long count = 0;
};

QuantileSummary summarize_quantiles(std::vector<double> values);

struct SinBoundTally {
  long checked = 0;
  long violations = 0;
  long not_applicable = 0;
};

/// Aggregates for one sample size.  success + no_solution + non_generic
/// always equals the replicate count; non_unique counts successes whose
/// uniqueness gap was below threshold.
struct SizeReport {
  std::int64_t m = 0;
  long replicates = 0;
  QuantileSummary error_fro;
  QuantileSummary max_sine;
  long success = 0;
  long no_solution = 0;
  long non_generic = 0;
  long non_unique = 0;
  SinBoundTally sin_bound;
  /// Smallest realized lambda_min(A0^T A0) across replicates.
  double lambda_min_a0 = 0.0;
};

struct SimulationReport {
  std::uint64_t base_seed = 0;
  long replicates = 0;
  std::vector<SizeReport> per_size;
};

/// Monte Carlo sweep over sample sizes: for each m and replicate the
/// dataset seed is mix_seed(base_seed, m, replicate), the model is fit,
/// and errors, angles, failure kinds and the angle-bound outcome are
/// aggregated.  Replicates are independent and run on a worker pool;
/// aggregation is order-independent, so reports are identical for every
/// thread count.  sample_sizes must be strictly ascending.
SimulationReport run_consistency(const ModelSpec& spec, const std::vector<std::int64_t>& sample_sizes,
                                 long replicates, std::uint64_t base_seed,
                                 const RunOptions& options = {});

}  // namespace eivtls
