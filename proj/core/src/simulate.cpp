#include "eivtls/simulate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "eivtls/errors.hpp"
#include "eivtls/sampling.hpp"
#include "eivtls/subspace.hpp"

namespace eivtls {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - std::floor(h);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

enum class Outcome { kSuccess, kNoSolution, kNonGeneric };
enum class BoundOutcome { kHolds, kViolated, kNotApplicable };

struct ReplicateResult {
  Outcome outcome = Outcome::kSuccess;
  double error_fro = 0.0;
  double max_sine = 0.0;
  bool non_unique = false;
  BoundOutcome bound = BoundOutcome::kNotApplicable;
  double lambda_min_a0 = 0.0;
};

ReplicateResult run_replicate(const ModelSpec& spec, std::int64_t m, std::uint64_t seed,
                              const ToleranceConfig& tol) {
  ReplicateResult res;
  const Dataset data = generate_dataset(spec, m, seed);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_matrix(data.truth.a0),
                                                    Eigen::EigenvaluesOnly);
  res.lambda_min_a0 = std::max(0.0, es.eigenvalues()(0));

  TlsSolution sol;
  try {
    sol = estimate(data.obs, spec.sigma, tol);
  } catch (const NoSolutionError&) {
    res.outcome = Outcome::kNoSolution;
    return res;
  } catch (const NonGenericError&) {
    res.outcome = Outcome::kNonGeneric;
    return res;
  }

  res.outcome = Outcome::kSuccess;
  res.error_fro = (sol.x_hat - data.truth.x0).norm();
  res.max_sine = canonical_sines(sol.x_ext, data.truth.x0_ext(), tol).max_sine;
  res.non_unique = !sol.unique;

  if (res.lambda_min_a0 > tol.abs_floor) {
    try {
      const SinBoundCheck chk = check_sin_bound(data.obs, data.truth, sol, spec.sigma, tol);
      res.bound = chk.holds ? BoundOutcome::kHolds : BoundOutcome::kViolated;
    } catch (const Error&) {
      res.bound = BoundOutcome::kNotApplicable;
    }
  }
  return res;
}

}  // namespace

QuantileSummary summarize_quantiles(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  QuantileSummary q;
  q.count = static_cast<long>(values.size());
  q.q10 = quantile_sorted(values, 0.10);
  q.q25 = quantile_sorted(values, 0.25);
  q.q50 = quantile_sorted(values, 0.50);
  q.q75 = quantile_sorted(values, 0.75);
  q.q90 = quantile_sorted(values, 0.90);
  return q;
}

SimulationReport run_consistency(const ModelSpec& spec,
                                 const std::vector<std::int64_t>& sample_sizes, long replicates,
                                 std::uint64_t base_seed, const RunOptions& options) {
  spec.validate();
  if (replicates < 1) throw InvalidSpecError("run_consistency: need replicates >= 1");
  if (sample_sizes.empty()) throw InvalidSpecError("run_consistency: no sample sizes");
  for (std::size_t i = 0; i + 1 < sample_sizes.size(); ++i)
    if (!(sample_sizes[i] < sample_sizes[i + 1]))
      throw InvalidSpecError("run_consistency: sample sizes must be strictly ascending");
  for (std::int64_t m : sample_sizes)
    if (m < 1) throw InvalidSpecError("run_consistency: sample sizes must be positive");

  const std::size_t n_sizes = sample_sizes.size();
  const std::size_t total = n_sizes * static_cast<std::size_t>(replicates);
  std::vector<ReplicateResult> cells(total);

  unsigned threads = options.threads > 0
                         ? static_cast<unsigned>(options.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(total));

  // Jobs are claimed off a shared counter; each writes only its own slot,
  // so the aggregation below is independent of scheduling.
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t size_idx = job / static_cast<std::size_t>(replicates);
      const auto replicate = static_cast<long>(job % static_cast<std::size_t>(replicates));
      const std::int64_t m = sample_sizes[size_idx];
      try {
        cells[job] = run_replicate(
            spec, m, mix_seed(base_seed, static_cast<std::uint64_t>(m),
                              static_cast<std::uint64_t>(replicate)),
            options.tol);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SimulationReport report;
  report.base_seed = base_seed;
  report.replicates = replicates;
  report.per_size.reserve(n_sizes);
  for (std::size_t s = 0; s < n_sizes; ++s) {
    SizeReport size_report;
    size_report.m = sample_sizes[s];
    size_report.replicates = replicates;
    size_report.lambda_min_a0 = std::numeric_limits<double>::infinity();
    std::vector<double> errors;
    std::vector<double> sines;
    for (long r = 0; r < replicates; ++r) {
      const ReplicateResult& cell =
          cells[s * static_cast<std::size_t>(replicates) + static_cast<std::size_t>(r)];
      size_report.lambda_min_a0 = std::min(size_report.lambda_min_a0, cell.lambda_min_a0);
      switch (cell.outcome) {
        case Outcome::kSuccess:
          ++size_report.success;
          errors.push_back(cell.error_fro);
          sines.push_back(cell.max_sine);
          if (cell.non_unique) ++size_report.non_unique;
          switch (cell.bound) {
            case BoundOutcome::kHolds:
              ++size_report.sin_bound.checked;
              break;
            case BoundOutcome::kViolated:
              ++size_report.sin_bound.checked;
              ++size_report.sin_bound.violations;
              break;
            case BoundOutcome::kNotApplicable:
              ++size_report.sin_bound.not_applicable;
              break;
          }
          break;
        case Outcome::kNoSolution:
          ++size_report.no_solution;
          break;
        case Outcome::kNonGeneric:
          ++size_report.non_generic;
          break;
      }
    }
    size_report.error_fro = summarize_quantiles(std::move(errors));
    size_report.max_sine = summarize_quantiles(std::move(sines));
    report.per_size.push_back(std::move(size_report));
  }
  return report;
}

}  // namespace eivtls
