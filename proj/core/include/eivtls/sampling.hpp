#pragma once

#include <cstdint>
#include <random>

#include "eivtls/linalg.hpp"

namespace eivtls {

/// splitmix64 finalizer; the building block of the replicate seeding
/// scheme.  Fixed for the life of the project so stored seeds keep
/// meaning across versions.
inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Per-replicate seed derivation:
///   mix_seed(base, size, replicate)
///     = splitmix64(splitmix64(splitmix64(base) ^ size) ^ replicate).
/// Every (base, size, replicate) triple maps to its own stream, so
/// replicates can run in any order on any number of threads and still
/// reproduce bit-identically.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t size,
                              std::uint64_t replicate) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ size) ^ replicate);
}

/// Deterministic samplers over a mt19937_64 stream.  All distribution
/// transforms are implemented here rather than with std:: distributions,
/// whose output is not pinned by the standard.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next_u64() { return rng_(); }

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; draws two uniforms and caches the
  /// second variate.
  double gaussian();

  /// Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang squeeze).
  double gamma(double shape);

  /// Student t with `dof` degrees of freedom, scaled to unit variance.
  /// Requires dof > 2.
  double student_t_standardized(double dof);

  /// +1 or -1 with equal probability.
  double rademacher() { return (rng_() & 1ull) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 rng_;
  bool has_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

/// Matrix with i.i.d. standard normal entries, filled row-major.
Eigen::MatrixXd gaussian_matrix(Sampler& sampler, Eigen::Index rows, Eigen::Index cols);

/// Random PSD matrix F F^T with F dim x rank gaussian.
SymmetricMatrix random_psd(Sampler& sampler, Eigen::Index dim, Eigen::Index rank);

/// Orthonormal columns: QR of a gaussian matrix.
Eigen::MatrixXd random_orthonormal(Sampler& sampler, Eigen::Index rows, Eigen::Index cols);

}  // namespace eivtls
