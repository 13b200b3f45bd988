#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qnl_eam/coefficients.hpp"
#include "qnl_eam/errors.hpp"
#include "qnl_eam/models.hpp"

namespace qnl_eam {

struct SpectrumEntry {
  int k;
  double s;
  double lambda;
};

struct SpectrumReport {
  double F = 0.0;
  int N = 0;
  std::vector<SpectrumEntry> modes;  ///< k = -N+1 .. N
  double lambda_min = 0.0;           ///< over k != 0
  int argmin_k = 0;                  ///< positive representative of the minimizing |k|
  bool minimizer_is_k1 = true;
};

/// lambda_F(s_k) for every wave number of the period.
inline SpectrumReport fourier_spectrum(const EAMPotential& p, double F, int N) {
  const ChainGrid grid(N);
  const StabilityCoefficients c = coefficients(p, F);
  SpectrumReport rep;
  rep.F = F;
  rep.N = N;
  rep.lambda_min = std::numeric_limits<double>::infinity();
  for (int k = grid.first_site(); k <= grid.last_site(); ++k) {
    const double s = fourier_symbol(k, N);
    const double lam = lambda_cubic(c, s);
    rep.modes.push_back({k, s, lam});
    if (k != 0 && (lam < rep.lambda_min || (lam == rep.lambda_min && std::abs(k) < rep.argmin_k))) {
      rep.lambda_min = lam;
      rep.argmin_k = std::abs(k);
    }
  }
  rep.minimizer_is_k1 = rep.argmin_k == 1;
  return rep;
}

namespace detail {

/// P S P + c 11^T / n with P the projector onto zero-sum strains and c above the
/// spectrum of S, so the deflated direction becomes the largest eigenvalue.
inline Eigen::MatrixXd deflated_strain_matrix(const SymmetricBandedOperator& S, double* shift) {
  const int n = S.size();
  Eigen::MatrixXd M = S.dense();
  const Eigen::VectorXd s = M.rowwise().sum();
  const double total = s.sum();
  const double inv_n = 1.0 / n;
  double bound = 0.0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, M.row(i).cwiseAbs().sum());
  const double c = 2.0 * bound + 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M(i, j) += -inv_n * (s(i) + s(j)) + inv_n * inv_n * total + c * inv_n;
  if (shift) *shift = c;
  return M;
}

}  // namespace detail

/// Eigenvalues of H u = lambda L u on zero-mean displacements, ascending. They
/// are the eigenvalues of the strain Hessian on zero-sum strains.
inline std::vector<double> stability_spectrum(ModelKind model, const RegionDecomposition* region,
                                              const EAMPotential& p, double F, int N) {
  const ChainGrid grid(N);
  double c = 0.0;
  const Eigen::MatrixXd M =
      detail::deflated_strain_matrix(strain_hessian(model, region, p, grid, F), &c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure(std::string("stability_spectrum: eigensolver failed for model ") +
                           to_string(model) + ", N=" + std::to_string(N) + ", F=" + std::to_string(F));
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());
  ev.pop_back();  // the deflated direction
  return ev;
}

struct MinEigResult {
  double lambda_min;
  PeriodicField mode;  ///< zero-mean displacement with ||D mode|| = 1
};

/// Smallest generalized eigenvalue of (H, L) on zero-mean displacements.
inline MinEigResult min_eig_numeric(ModelKind model, const RegionDecomposition* region,
                                    const EAMPotential& p, double F, int N) {
  const ChainGrid grid(N);
  double c = 0.0;
  const Eigen::MatrixXd M =
      detail::deflated_strain_matrix(strain_hessian(model, region, p, grid, F), &c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw NumericalFailure(std::string("min_eig_numeric: eigensolver failed for model ") +
                           to_string(model) + ", N=" + std::to_string(N) + ", F=" + std::to_string(F));
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  std::vector<double> strain(v.data(), v.data() + v.size());
  const double m = v.mean();
  const double scale = 1.0 / std::sqrt(grid.epsilon() * (v.array() - m).square().sum());
  for (double& x : strain) x = (x - m) * scale;
  return {es.eigenvalues()(0), displacement_from_strain(PeriodicField(grid, strain, FieldKind::Strain))};
}

/// True when H is positive definite on zero-mean displacements (Cholesky test).
inline bool is_stable(ModelKind model, const RegionDecomposition* region, const EAMPotential& p,
                      double F, int N) {
  const ChainGrid grid(N);
  double c = 0.0;
  const Eigen::MatrixXd M =
      detail::deflated_strain_matrix(strain_hessian(model, region, p, grid, F), &c);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  return llt.info() == Eigen::Success;
}

/// Reference solve of H u = lambda L u on the full displacement space: constants
/// are deflated with a large shift on H and a unit shift on L, and the spurious
/// eigenvalue is dropped. Dense and slow; used to cross-check the strain route.
inline std::vector<double> dense_generalized_spectrum(const SymmetricBandedOperator& H) {
  const int n = H.size();
  const ChainGrid& g = H.grid();
  const double big = 1e6;
  Eigen::MatrixXd A = H.dense() + big / n * Eigen::MatrixXd::Ones(n, n);
  Eigen::MatrixXd B = strain_metric(g).dense() + Eigen::MatrixXd::Ones(n, n) / n;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("dense_generalized_spectrum: solver failed");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  // the constant vector gives lambda = big
  auto it = std::min_element(ev.begin(), ev.end(),
                             [&](double a, double b) { return std::abs(a - big) < std::abs(b - big); });
  ev.erase(it);
  return ev;
}

/// Strain F* in [F_lo, F_hi] where the model loses stability, by bisection on
/// the sign of lambda_min to |dF| <= tol.
inline double critical_strain(ModelKind model, const RegionDecomposition* region,
                              const EAMPotential& p, int N, double F_lo, double F_hi,
                              double tol = 1e-10) {
  bool s_lo = is_stable(model, region, p, F_lo, N);
  const bool s_hi = is_stable(model, region, p, F_hi, N);
  if (s_lo == s_hi)
    throw BracketError("critical_strain: model is " + std::string(s_lo ? "stable" : "unstable") +
                       " at both ends of [" + std::to_string(F_lo) + ", " + std::to_string(F_hi) + "]");
  double a = F_lo, b = F_hi;
  while (std::abs(b - a) > tol) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    if (is_stable(model, region, p, mid, N) == s_lo) a = mid;
    else b = mid;
  }
  return 0.5 * (a + b);
}

/// Oscillatory test displacements: u_tilde_l = (-1)^l eps / (2 sqrt 2) on the whole
/// period, u_hat the same for |l| <= K - 1 and zero elsewhere (then projected to
/// zero mean, which leaves its strain unchanged).
inline std::pair<PeriodicField, PeriodicField> remark_test_functions(int N, int K) {
  const ChainGrid grid(N);
  if (K < 2 || K > N - 3)
    throw std::invalid_argument("remark_test_functions: need 2 <= K <= N - 3, got K=" + std::to_string(K));
  const double amp = grid.epsilon() / (2.0 * std::sqrt(2.0));
  auto sign = [](int l) { return (l % 2 == 0) ? 1.0 : -1.0; };
  PeriodicField ut = PeriodicField::from_sites(
      grid, [&](int l) { return sign(l) * amp; }, FieldKind::Displacement);
  PeriodicField uh = PeriodicField::from_sites(
      grid, [&](int l) { return std::abs(l) <= K - 1 ? sign(l) * amp : 0.0; },
      FieldKind::Displacement);
  return {ut, uh};
}

/// <H u, u> / ||Du||^2.
inline double rayleigh_quotient(const SymmetricBandedOperator& H, const PeriodicField& u) {
  const double n2 = norm_l2eps(diff(u, 1));
  if (n2 == 0.0) throw std::invalid_argument("rayleigh_quotient: zero strain");
  return H.form(u, u) / (n2 * n2);
}

}  // namespace qnl_eam
