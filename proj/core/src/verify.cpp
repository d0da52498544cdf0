#include "eivtls/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "eivtls/errors.hpp"
#include "eivtls/sampling.hpp"
#include "eivtls/simulate.hpp"
#include "eivtls/subspace.hpp"

namespace eivtls::verify {

namespace {

std::string tally_line(const std::string& label, long checked, long violations, long skipped) {
  std::ostringstream os;
  os << label << ": " << checked << " checked, " << violations << " violations, " << skipped
     << " skipped";
  return os.str();
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

/// Random symmetric matrix with unit spectral norm.
Eigen::MatrixXd random_direction(Sampler& sampler, Eigen::Index k) {
  const Eigen::MatrixXd s = symmetrize(gaussian_matrix(sampler, k, k));
  return s / spectral_norm(s);
}

/// Chordal distance |x - y| / (sqrt(1 + x^2) sqrt(1 + y^2)), extended
/// continuously to +infinity.  The natural metric for generalized
/// eigenvalues: the ratio lambda/mu is ill-conditioned near the infinite
/// boundary, where this metric contracts instead of blowing up.
double chordal_distance(const ExtendedReal& x, const ExtendedReal& y) {
  if (x.is_infinite() && y.is_infinite()) return 0.0;
  if (x.is_infinite() || y.is_infinite()) {
    const double v = x.is_infinite() ? y.value() : x.value();
    return 1.0 / std::sqrt(1.0 + v * v);
  }
  return std::abs(x.value() - y.value()) /
         (std::sqrt(1.0 + x.value() * x.value()) * std::sqrt(1.0 + y.value() * y.value()));
}

}  // namespace

SuiteResult run_pencil_suite(long pairs, std::uint64_t seed, const ToleranceConfig& tol) {
  SuiteResult res;
  res.name = "pencil";
  Sampler sampler(splitmix64(seed ^ 0x70656e63696cull));

  long singular_b = 0;
  long singular_sum = 0;
  long range_aligned = 0;
  long scale_checks = 0;
  long pinv_guarded = 0;

  for (long p = 0; p < pairs; ++p) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(sampler.next_u64() % 7);
    const int category = static_cast<int>(p % 5);

    SymmetricMatrix a = SymmetricMatrix::zero(dim);
    SymmetricMatrix b = SymmetricMatrix::zero(dim);
    switch (category) {
      case 0:
        a = random_psd(sampler, dim, dim);
        b = random_psd(sampler, dim, dim);
        break;
      case 1: {
        const Eigen::Index rank = 1 + static_cast<Eigen::Index>(sampler.next_u64() % (dim - 1));
        a = random_psd(sampler, dim, dim);
        b = random_psd(sampler, dim, rank);
        break;
      }
      case 2: {
        const Eigen::Index rank = 1 + static_cast<Eigen::Index>(sampler.next_u64() % (dim - 1));
        a = random_psd(sampler, dim, rank);
        b = random_psd(sampler, dim, dim);
        break;
      }
      case 3: {
        // Shared kernel: both forms live on the same proper subspace.
        const Eigen::Index live = 1 + static_cast<Eigen::Index>(sampler.next_u64() % (dim - 1));
        const Eigen::MatrixXd q = random_orthonormal(sampler, dim, live);
        a = SymmetricMatrix(q * random_psd(sampler, live, live).matrix() * q.transpose());
        b = SymmetricMatrix(q * random_psd(sampler, live, live).matrix() * q.transpose());
        break;
      }
      case 4: {
        // range(A) inside range(B), so rank(A + B) == rank(B).
        const Eigen::Index rank = 1 + static_cast<Eigen::Index>(sampler.next_u64() % dim);
        b = random_psd(sampler, dim, rank);
        const Eigen::MatrixXd f = factor_psd(b, tol);
        a = SymmetricMatrix(f * random_psd(sampler, f.cols(), f.cols()).matrix() *
                            f.transpose());
        break;
      }
      default:
        break;
    }

    if (numerical_rank(b.matrix(), tol) < dim) ++singular_b;
    if (numerical_rank(a.matrix() + b.matrix(), tol) < dim) ++singular_sum;

    const PencilDiagonalization diag = simultaneous_diagonalize(a, b, tol);
    ++res.checked;
    bool bad = false;

    const double norm_a2 = spectral_norm(a.matrix());
    const double norm_b2 = spectral_norm(b.matrix());
    const double recon_tol = 1e-9 * (1.0 + a.matrix().norm() + b.matrix().norm());

    Eigen::FullPivLU<Eigen::MatrixXd> lu(diag.eigenvectors);
    if (!lu.isInvertible()) {
      bad = true;
    } else {
      const Eigen::MatrixXd tinv = lu.inverse();
      const Eigen::MatrixXd recon_a =
          tinv.transpose() * diag.lambda.asDiagonal() * tinv;
      const Eigen::MatrixXd recon_b = tinv.transpose() * diag.mu.asDiagonal() * tinv;
      if ((recon_a - a.matrix()).norm() > recon_tol) bad = true;
      if ((recon_b - b.matrix()).norm() > recon_tol) bad = true;
    }

    const double eig_tol = 1e-8 * (1.0 + norm_a2 + norm_b2);
    for (Eigen::Index i = 0; i < dim && !bad; ++i) {
      const Eigen::VectorXd u = diag.eigenvectors.col(i);
      const Eigen::VectorXd resid =
          a.matrix() * u * diag.mu(i) - b.matrix() * u * diag.lambda(i);
      if (resid.norm() > eig_tol * u.norm()) bad = true;
    }

    for (Eigen::Index i = 1; i <= dim && !bad; ++i) {
      const ExtendedReal& nu_i = diag.nu[static_cast<std::size_t>(i - 1)];
      if (nu_i.is_infinite()) break;
      // Second arm: evaluating the residual at huge nu multiplies B by nu,
      // so its roundoff floor grows with nu; below that floor no double
      // precision result could meet the fixed slack.
      const double slack =
          std::max(1e-8 * (1.0 + norm_a2),
                   30.0 * static_cast<double>(dim) * std::numeric_limits<double>::epsilon() *
                       (1.0 + nu_i.value()) * (1.0 + norm_a2 + norm_b2));
      if (variational_residual(diag, a, b, i) > slack) bad = true;
    }

    if (numerical_rank(a.matrix() + b.matrix(), tol) == numerical_rank(b.matrix(), tol)) {
      const Eigen::MatrixXd b_pinv = pinv(b.matrix(), tol);
      // Comparing two pseudoinverse routes at 1e-8 relative is decidable
      // in double precision only while eps * cond(B) stays well below
      // that; beyond the guard neither route is that accurate.
      const double kappa = norm_b2 * spectral_norm(b_pinv);
      if (kappa <= 1e6) {
        ++range_aligned;
        Eigen::VectorXd mu_pinv = diag.mu;
        for (Eigen::Index i = 0; i < dim; ++i)
          mu_pinv(i) = diag.mu(i) > 0.0 ? 1.0 / diag.mu(i) : 0.0;
        const Eigen::MatrixXd via_pencil =
            diag.eigenvectors * mu_pinv.asDiagonal() * diag.eigenvectors.transpose();
        if ((via_pencil - b_pinv).norm() > 1e-8 * (1.0 + b_pinv.norm())) bad = true;
      } else {
        ++pinv_guarded;
      }
    }

    if (p % 5 == 0) {
      ++scale_checks;
      const double c = std::pow(10.0, sampler.uniform(-2.0, 2.0));
      const PencilDiagonalization scaled =
          simultaneous_diagonalize(a, SymmetricMatrix(c * b.matrix()), tol);
      for (Eigen::Index i = 0; i < dim && !bad; ++i) {
        const ExtendedReal& orig = diag.nu[static_cast<std::size_t>(i)];
        const ExtendedReal& got = scaled.nu[static_cast<std::size_t>(i)];
        const ExtendedReal expect =
            orig.is_infinite() ? ExtendedReal::infinite() : ExtendedReal::finite(orig.value() / c);
        if (chordal_distance(got, expect) > 1e-10) bad = true;
      }
    }

    if (bad) ++res.violations;
  }

  res.notes.push_back(tally_line("diagonalization sweep", res.checked, res.violations, 0));
  {
    std::ostringstream os;
    os << "mix: " << singular_b << " singular second forms, " << singular_sum
       << " singular sums, " << range_aligned << " range-aligned, " << scale_checks
       << " scaling checks, " << pinv_guarded << " pinv comparisons skipped as ill-conditioned";
    res.notes.push_back(os.str());
  }
  return res;
}

SuiteResult run_sin_bound_sweep(long replicates, std::uint64_t seed,
                                const ToleranceConfig& tol) {
  SuiteResult res;
  res.name = "sin_bound";

  Sampler setup(splitmix64(seed ^ 0x73696e62ull));

  // Multi-response model: three gaussian regressors, two responses, dense
  // full-rank covariance.
  ModelSpec multi{
      3,
      2,
      gaussian_matrix(setup, 3, 2),
      RegressorLaw{{RegressorColumn::gaussian(0.0, 1.0), RegressorColumn::gaussian(0.5, 1.0),
                    RegressorColumn::gaussian(-0.5, 1.0)},
                   std::nullopt},
      ErrorLaw{ErrorFamily::kGaussian, 0.0},
      ErrorCovariance(SymmetricMatrix([&] {
        const Eigen::MatrixXd raw = random_psd(setup, 5, 5).matrix();
        return Eigen::MatrixXd(0.25 * raw / spectral_norm(raw));
      }()),
                      tol),
      2.0};

  // Scalar-response model with an error-free intercept column.
  Eigen::MatrixXd x0_uni(2, 1);
  x0_uni << 1.0, 2.0;
  Eigen::VectorXd diag_uni(3);
  diag_uni << 0.0, 0.25, 0.25;
  ModelSpec uni{2,
                1,
                x0_uni,
                RegressorLaw{{RegressorColumn::constant(1.0), RegressorColumn::uniform(0.0, 3.0)},
                             std::nullopt},
                ErrorLaw{ErrorFamily::kGaussian, 0.0},
                ErrorCovariance(SymmetricMatrix(diag_uni.asDiagonal()), tol),
                2.0};

  const std::int64_t m = 1000;
  long checked_multi = 0, violations_multi = 0, skipped_multi = 0;
  long checked_uni = 0, violations_uni = 0, skipped_uni = 0;

  for (long rep = 0; rep < replicates; ++rep) {
    for (int which = 0; which < 2; ++which) {
      const ModelSpec& spec = which == 0 ? multi : uni;
      long& checked = which == 0 ? checked_multi : checked_uni;
      long& violations = which == 0 ? violations_multi : violations_uni;
      long& skipped = which == 0 ? skipped_multi : skipped_uni;

      const std::uint64_t rep_seed =
          mix_seed(seed ^ (which == 0 ? 0x6d756c7469ull : 0x756e69ull),
                   static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(rep));
      const Dataset data = generate_dataset(spec, m, rep_seed);
      try {
        const TlsSolution sol = estimate(data.obs, spec.sigma, tol);
        const SinBoundCheck chk = check_sin_bound(data.obs, data.truth, sol, spec.sigma, tol);
        ++checked;
        if (!chk.holds) ++violations;
      } catch (const Error&) {
        ++skipped;
      }
    }
  }

  res.checked = checked_multi + checked_uni;
  res.violations = violations_multi + violations_uni;
  res.skipped = skipped_multi + skipped_uni;
  res.notes.push_back(
      tally_line("multi-response angle bound", checked_multi, violations_multi, skipped_multi));
  res.notes.push_back(
      tally_line("scalar-response angle bound", checked_uni, violations_uni, skipped_uni));
  return res;
}

SuiteResult run_perturbation_sweep(long replicates, std::uint64_t seed,
                                   const ToleranceConfig& tol) {
  SuiteResult res;
  res.name = "perturbation";
  Sampler sampler(splitmix64(seed ^ 0x70657274ull));
  const Eigen::Index k = 6;

  for (long rep = 0; rep < replicates; ++rep) {
    const Eigen::Index d = 1 + (rep % 2);
    const Eigen::MatrixXd x0 = random_orthonormal(sampler, k, d);

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x0);
    const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd comp = full.rightCols(k - d);

    Eigen::VectorXd vals(k - d);
    for (Eigen::Index i = 0; i < k - d; ++i) vals(i) = sampler.uniform(0.5, 3.0);
    const Eigen::MatrixXd a = comp * vals.asDiagonal() * comp.transpose();
    const double lambda_next = vals.minCoeff();
    const double tilde_norm = 0.01 * lambda_next;

    Eigen::MatrixXd b;
    Eigen::MatrixXd a_tilde;
    Eigen::MatrixXd x_star;
    bool prepared = false;

    if (rep % 2 == 0) {
      // Positive definite second form, arbitrary symmetric perturbation:
      // the minimizer is the span of the d smallest generalized
      // eigenvectors.
      const Eigen::MatrixXd raw = random_psd(sampler, k, k).matrix();
      b = raw + (0.05 * raw.trace() / static_cast<double>(k)) *
                    Eigen::MatrixXd::Identity(k, k);
      a_tilde = tilde_norm * random_direction(sampler, k);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(symmetrize(a + a_tilde), b);
      if (ges.info() == Eigen::Success) {
        x_star = ges.eigenvectors().leftCols(d);
        prepared = true;
      }
    } else {
      // Singular PSD second form with a PSD perturbation; the pair stays
      // PSD and the pencil solver supplies the minimizer.
      for (int attempt = 0; attempt < 8 && !prepared; ++attempt) {
        b = random_psd(sampler, k, k - 1).matrix();
        const Eigen::MatrixXd psd_dir = random_psd(sampler, k, k).matrix();
        a_tilde = tilde_norm * psd_dir / spectral_norm(psd_dir);
        const SymmetricMatrix xbx(x0.transpose() * b * x0);
        if (numerical_rank(xbx.matrix(), tol) < d) continue;
        const SymmetricMatrix sum(a + a_tilde + b);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sum.matrix(), Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues()(0) > tol.rank_rel(k, k) * es.eigenvalues()(k - 1))) continue;
        const PencilDiagonalization diag = simultaneous_diagonalize(
            SymmetricMatrix(a + a_tilde), SymmetricMatrix(b), tol);
        if (diag.nu[static_cast<std::size_t>(d - 1)].is_infinite()) continue;
        x_star = diag.eigenvectors.leftCols(d);
        prepared = true;
      }
    }

    if (!prepared) {
      ++res.skipped;
      continue;
    }
    try {
      const PerturbationCheck chk = check_perturbation_bound(a, b, a_tilde, x0, x_star, tol);
      ++res.checked;
      if (!chk.holds) ++res.violations;
    } catch (const PreconditionError&) {
      ++res.skipped;
    }
  }

  res.notes.push_back(tally_line("kernel perturbation bound", res.checked, res.violations,
                                 res.skipped));
  return res;
}

SuiteResult run_recovery_bound_sweep(long replicates, std::uint64_t seed) {
  SuiteResult res;
  res.name = "recovery_bound";
  Sampler sampler(splitmix64(seed ^ 0x7265636full));
  const ToleranceConfig tol{};

  for (long rep = 0; rep < replicates; ++rep) {
    const Eigen::Index n = 1 + (rep % 3);
    const Eigen::Index d = 1 + (rep % 2);
    const Eigen::MatrixXd x0 = sampler.uniform(0.3, 1.5) * gaussian_matrix(sampler, n, d);

    Eigen::MatrixXd truth(n + d, d);
    truth.topRows(n) = x0;
    truth.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);

    const Eigen::MatrixXd rot =
        Eigen::MatrixXd::Identity(d, d) + 0.1 * gaussian_matrix(sampler, d, d);
    const double eta = std::pow(10.0, sampler.uniform(-4.0, -0.8));
    const Eigen::MatrixXd perturbed = truth * rot + eta * gaussian_matrix(sampler, n + d, d);

    if (numerical_rank(perturbed, tol) < d || numerical_rank(rot, tol) < d) {
      ++res.skipped;
      continue;
    }
    const double s = canonical_sines(perturbed, truth, tol).max_sine;
    const double x0_norm = spectral_norm(x0);
    if (!(s * s * (1.0 + x0_norm * x0_norm) < 1.0)) {
      ++res.skipped;
      continue;
    }
    const Eigen::MatrixXd bottom = perturbed.bottomRows(d);
    if (numerical_rank(bottom, tol) < d) {
      ++res.skipped;
      continue;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bottom.transpose());
    const Eigen::MatrixXd coeff = (qr.solve(perturbed.topRows(n).transpose())).transpose();

    ++res.checked;
    const double lhs = spectral_norm(coeff + x0);
    const double bound = xhat_error_bound(s, x0_norm);
    if (!(lhs <= bound + 1e-10)) ++res.violations;
  }

  res.notes.push_back(
      tally_line("coefficient recovery bound", res.checked, res.violations, res.skipped));
  return res;
}

SuiteResult run_classical_agreement(long instances, std::uint64_t seed,
                                    const ToleranceConfig& tol) {
  SuiteResult res;
  res.name = "classical_agreement";
  Sampler sampler(splitmix64(seed ^ 0x636c6173ull));

  ToleranceConfig gap_tol = tol;
  gap_tol.gap_rtol = 1e-6;

  static constexpr struct {
    Eigen::Index n, d;
  } kShapes[] = {{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {3, 3}};
  constexpr int kShapeCount = 8;

  long attempts = 0;
  const long max_attempts = instances * 20;
  while (res.checked < instances && attempts < max_attempts) {
    ++attempts;
    const auto& shape = kShapes[attempts % kShapeCount];
    const Eigen::Index m = 25 + static_cast<Eigen::Index>(sampler.next_u64() % 26);

    const Eigen::MatrixXd a0 = gaussian_matrix(sampler, m, shape.n);
    const Eigen::MatrixXd x0 = gaussian_matrix(sampler, shape.n, shape.d);
    Eigen::MatrixXd c(m, shape.n + shape.d);
    c.leftCols(shape.n) = a0;
    c.rightCols(shape.d) = a0 * x0;
    c += 0.1 * gaussian_matrix(sampler, m, shape.n + shape.d);

    const ObservationSet obs = ObservationSet::from_joint(c, shape.n, shape.d);
    const ErrorCovariance identity(SymmetricMatrix::identity(shape.n + shape.d), gap_tol);
    try {
      const Eigen::MatrixXd reference = classical_tls_oracle(obs, gap_tol);
      const TlsSolution sol = estimate(obs, identity, gap_tol);
      if (!sol.unique) {
        ++res.skipped;
        continue;
      }
      ++res.checked;
      if ((sol.x_hat - reference).norm() > 1e-8) ++res.violations;
    } catch (const GapTooSmallError&) {
      ++res.skipped;
    } catch (const NonGenericError&) {
      ++res.skipped;
    } catch (const NoSolutionError&) {
      ++res.skipped;
    }
  }

  res.notes.push_back(
      tally_line("classical SVD agreement", res.checked, res.violations, res.skipped));
  return res;
}

SuiteResult run_brute_force_agreement(long instances, std::uint64_t seed, const GridSpec& grid,
                                      const ToleranceConfig& tol) {
  SuiteResult res;
  res.name = "brute_force_agreement";
  Sampler sampler(splitmix64(seed ^ 0x62727574ull));

  for (long i = 0; i < instances; ++i) {
    Eigen::MatrixXd sigma(2, 2);
    switch (i % 3) {
      case 0:
        sigma << 0.0, 0.0, 0.0, 1.0;
        break;
      case 1:
        sigma = Eigen::MatrixXd::Identity(2, 2);
        break;
      default: {
        const double rho = sampler.uniform(-0.8, 0.8);
        const double extra = sampler.uniform(0.0, 1.0);
        sigma << 1.0, rho, rho, 1.0 + extra;
        break;
      }
    }
    const ErrorCovariance cov{SymmetricMatrix(sigma), tol};

    const double x0 = sampler.uniform(-3.0, 3.0);
    const Eigen::Index m = 20 + static_cast<Eigen::Index>(sampler.next_u64() % 11);
    Eigen::MatrixXd c0(m, 2);
    for (Eigen::Index r = 0; r < m; ++r) {
      c0(r, 0) = sampler.uniform(-2.0, 2.0);
      c0(r, 1) = c0(r, 0) * x0;
    }
    const Eigen::MatrixXd f = factor_psd(cov.sym(), tol);
    Eigen::MatrixXd c = c0;
    for (Eigen::Index r = 0; r < m; ++r) {
      Eigen::VectorXd z(f.cols());
      for (Eigen::Index t = 0; t < f.cols(); ++t) z(t) = sampler.gaussian();
      c.row(r) += (0.3 * f * z).transpose();
    }

    const ObservationSet obs = ObservationSet::from_joint(c, 1, 1);
    try {
      const TlsSolution sol = estimate(obs, cov, tol);
      const double xhat = sol.x_hat(0, 0);
      if (xhat < grid.lo + 0.5 || xhat > grid.hi - 0.5) {
        ++res.skipped;
        continue;
      }
      const double brute = brute_force_tls(obs, cov, grid, tol);
      ++res.checked;
      if (std::abs(brute - xhat) > 2.0 * grid.step) ++res.violations;
    } catch (const NonGenericError&) {
      ++res.skipped;
    } catch (const NoSolutionError&) {
      ++res.skipped;
    }
  }

  res.notes.push_back(
      tally_line("grid-search agreement", res.checked, res.violations, res.skipped));
  return res;
}

SuiteResult run_bounds_suite(long replicates, std::uint64_t seed, const ToleranceConfig& tol) {
  SuiteResult res;
  res.name = "bounds";
  for (const SuiteResult& part :
       {run_sin_bound_sweep(replicates, seed, tol), run_perturbation_sweep(replicates, seed, tol),
        run_recovery_bound_sweep(replicates, seed)}) {
    res.checked += part.checked;
    res.violations += part.violations;
    res.skipped += part.skipped;
    res.notes.insert(res.notes.end(), part.notes.begin(), part.notes.end());
  }
  return res;
}

SuiteResult run_oracle_suite(long replicates, std::uint64_t seed, const ToleranceConfig& tol) {
  SuiteResult res;
  res.name = "oracle";
  const long brute_instances = std::max<long>(2, replicates / 25);
  for (const SuiteResult& part : {run_classical_agreement(replicates, seed, tol),
                                  run_brute_force_agreement(brute_instances, seed, GridSpec{},
                                                            tol)}) {
    res.checked += part.checked;
    res.violations += part.violations;
    res.skipped += part.skipped;
    res.notes.insert(res.notes.end(), part.notes.begin(), part.notes.end());
  }
  return res;
}

}  // namespace eivtls::verify
