#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "eivtls/pencil.hpp"
#include "eivtls/sampling.hpp"
#include "eivtls/subspace.hpp"
#include "eivtls/tls.hpp"

namespace {

eivtls::ObservationSet make_observations(Eigen::Index m) {
  eivtls::Sampler sampler(12);
  Eigen::MatrixXd c(m, 3);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double xi = sampler.uniform(0.0, 3.0);
    c(r, 0) = 1.0;
    c(r, 1) = xi + 0.5 * sampler.gaussian();
    c(r, 2) = 1.0 + 2.0 * xi + 0.5 * sampler.gaussian();
  }
  return eivtls::ObservationSet::from_joint(c, 2, 1);
}

void bm_estimate(benchmark::State& state) {
  const auto obs = make_observations(state.range(0));
  Eigen::VectorXd diag(3);
  diag << 0.0, 0.25, 0.25;
  const eivtls::ErrorCovariance cov{
      eivtls::SymmetricMatrix(diag.asDiagonal().toDenseMatrix())};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eivtls::estimate(obs, cov));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_estimate)->Arg(1000)->Arg(10000)->Arg(100000);

void bm_simultaneous_diagonalize(benchmark::State& state) {
  eivtls::Sampler sampler(34);
  const Eigen::Index dim = state.range(0);
  const auto a = eivtls::random_psd(sampler, dim, dim);
  const auto b = eivtls::random_psd(sampler, dim, dim - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eivtls::simultaneous_diagonalize(a, b));
  }
}
BENCHMARK(bm_simultaneous_diagonalize)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void bm_canonical_sines(benchmark::State& state) {
  eivtls::Sampler sampler(56);
  const Eigen::MatrixXd x1 = eivtls::gaussian_matrix(sampler, 50, 5);
  const Eigen::MatrixXd x2 = eivtls::gaussian_matrix(sampler, 50, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eivtls::canonical_sines(x1, x2));
  }
}
BENCHMARK(bm_canonical_sines);

}  // namespace

BENCHMARK_MAIN();
