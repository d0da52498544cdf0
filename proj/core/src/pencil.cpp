#include "eivtls/pencil.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

#include "eivtls/errors.hpp"

namespace eivtls {

ExtendedReal ExtendedReal::finite(double v) {
  ExtendedReal r;
  r.value_ = v;
  r.infinite_ = false;
  return r;
}

ExtendedReal ExtendedReal::infinite() {
  ExtendedReal r;
  r.infinite_ = true;
  return r;
}

double ExtendedReal::value() const {
  if (infinite_) throw InfiniteEigenvalueError("finite value requested from +infinity");
  return value_;
}

Eigen::MatrixXd factor_psd(const SymmetricMatrix& b, const ToleranceConfig& tol) {
  PsdEigen eig = psd_eigendecompose(b, tol);
  const Eigen::Index n = b.dim();
  const double lmax = n > 0 ? eig.values(n - 1) : 0.0;
  const double cutoff = std::max(tol.rank_rel(n, n) * lmax, tol.abs_floor);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values(i) >= cutoff) ++rank;
  Eigen::MatrixXd f(n, rank);
  Eigen::Index col = 0;
  for (Eigen::Index i = n - rank; i < n; ++i)
    f.col(col++) = eig.vectors.col(i) * std::sqrt(eig.values(i));
  return f;
}

PencilDiagonalization simultaneous_diagonalize(const SymmetricMatrix& a,
                                               const SymmetricMatrix& b,
                                               const ToleranceConfig& tol) {
  if (a.dim() != b.dim())
    throw DimensionError("simultaneous_diagonalize: forms have different dimensions");
  const Eigen::Index k = a.dim();

  // The factorizations validate PSD-ness up front, so failures surface
  // here instead of as mysterious classification errors later.
  const Eigen::MatrixXd fa = factor_psd(a, tol);
  const Eigen::MatrixXd fb = factor_psd(b, tol);

  PencilDiagonalization out;
  out.eigenvectors = Eigen::MatrixXd::Identity(k, k);
  out.lambda = Eigen::VectorXd::Zero(k);
  out.mu = Eigen::VectorXd::Zero(k);
  out.nu.assign(static_cast<std::size_t>(k), ExtendedReal::finite(0.0));
  if (k == 0) return out;

  const SymmetricMatrix sum(a.matrix() + b.matrix());
  const PsdEigen sum_eig = psd_eigendecompose(sum, tol);
  const double sum_max = sum_eig.values(k - 1);
  const double kernel_cut = std::max(tol.rank_rel(k, k) * sum_max, tol.abs_floor);

  Eigen::Index kernel_dim = 0;
  while (kernel_dim < k && sum_eig.values(kernel_dim) < kernel_cut) ++kernel_dim;
  const Eigen::Index r = k - kernel_dim;

  // Shared kernel of A + B: for PSD forms both vanish there, so these
  // columns carry lambda = mu = 0.
  out.eigenvectors.leftCols(kernel_dim) = sum_eig.vectors.leftCols(kernel_dim);

  if (r > 0) {
    const Eigen::VectorXd s_pos = sum_eig.values.tail(r);
    const Eigen::MatrixXd u_pos = sum_eig.vectors.rightCols(r);
    const Eigen::MatrixXd w = u_pos * s_pos.cwiseSqrt().cwiseInverse().asDiagonal();
    // W^T (A + B) W = I, so one eigenbasis diagonalizes both reduced
    // forms.  Each form is pushed through W via its own PSD factor and
    // read off as squared column norms: where a form truly vanishes the
    // norm is roundoff squared, quadratically below the rank cutoff,
    // instead of cancellation noise that can sit just above it.
    const Eigen::MatrixXd ga = fa.transpose() * w;
    const Eigen::MatrixXd gb = fb.transpose() * w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ga.transpose() * ga);
    if (es.info() != Eigen::Success)
      throw Error("eigensolver_failed", "reduced form eigendecomposition did not converge");
    const Eigen::MatrixXd q = es.eigenvectors();
    out.eigenvectors.rightCols(r) = w * q;
    out.lambda.tail(r) = (ga * q).colwise().squaredNorm().transpose().cwiseMin(1.0);
    out.mu.tail(r) = (gb * q).colwise().squaredNorm().transpose().cwiseMin(1.0);
  }

  // On the whitened complement lambda + mu = 1 per column, so the rank
  // cutoff is absolute on that unit scale. Snapping to exact zero makes
  // the 0/0 -> 0 and x/0 -> infinity rules fire deterministically (a
  // second form that is numerically zero must yield infinite nu, not a
  // huge finite ratio of roundoff).
  const double snap = tol.rank_rel(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.lambda(i) < snap) out.lambda(i) = 0.0;
    if (out.mu(i) < snap) out.mu(i) = 0.0;
  }

  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.mu(i) > 0.0)
      out.nu[static_cast<std::size_t>(i)] = ExtendedReal::finite(out.lambda(i) / out.mu(i));
    else if (out.lambda(i) > 0.0)
      out.nu[static_cast<std::size_t>(i)] = ExtendedReal::infinite();
    else
      out.nu[static_cast<std::size_t>(i)] = ExtendedReal::finite(0.0);
  }

  // The construction already yields ascending nu (kernel zeros first,
  // then ascending alpha); the stable sort is a deterministic guarantee,
  // not a correctness requirement.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return out.nu[static_cast<std::size_t>(i)] < out.nu[static_cast<std::size_t>(j)];
  });

  PencilDiagonalization sorted;
  sorted.eigenvectors.resize(k, k);
  sorted.lambda.resize(k);
  sorted.mu.resize(k);
  sorted.nu.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    sorted.eigenvectors.col(i) = out.eigenvectors.col(src);
    sorted.lambda(i) = out.lambda(src);
    sorted.mu(i) = out.mu(src);
    sorted.nu[static_cast<std::size_t>(i)] = out.nu[static_cast<std::size_t>(src)];
  }
  return sorted;
}

bool pencil_definite(const SymmetricMatrix& a, const SymmetricMatrix& b,
                     const ToleranceConfig& tol) {
  if (a.dim() != b.dim())
    throw DimensionError("pencil_definite: forms have different dimensions");
  const Eigen::Index k = a.dim();
  (void)psd_eigendecompose(a, tol);
  (void)psd_eigendecompose(b, tol);
  if (k == 0) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix() + b.matrix(),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& v = es.eigenvalues();
  return v(0) > tol.rank_rel(k, k) * v(k - 1);
}

double variational_residual(const PencilDiagonalization& diag, const SymmetricMatrix& a,
                            const SymmetricMatrix& b, Eigen::Index leading_count) {
  const Eigen::Index k = diag.eigenvectors.cols();
  if (leading_count < 1 || leading_count > k)
    throw DimensionError("variational_residual: leading_count out of range");
  if (a.dim() != k || b.dim() != k)
    throw DimensionError("variational_residual: forms do not match the diagonalization");
  const ExtendedReal& nu_i = diag.nu[static_cast<std::size_t>(leading_count - 1)];
  if (nu_i.is_infinite())
    throw InfiniteEigenvalueError("variational_residual: eigenvalue at index is infinite");
  const Eigen::MatrixXd v = diag.eigenvectors.leftCols(leading_count);
  Eigen::MatrixXd g =
      v.transpose() * (a.matrix() - nu_i.value() * b.matrix()) * v;
  g = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(leading_count - 1);
}

}  // namespace eivtls
