#pragma once

// Linearized equilibrium at y_F under a dead load f:
//   <H u, w> = eps * sum_l f_l w_l  for all zero-mean w,  i.e.  H u = eps f.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qnl_eam/errors.hpp"
#include "qnl_eam/models.hpp"
#include "qnl_eam/stability.hpp"

namespace qnl_eam {

struct DeadLoad {
  PeriodicField f;
  std::string source;

  /// Samples f(x_l), x_l = eps * l.
  template <class Fn>
  static DeadLoad sampled(ChainGrid grid, Fn&& fn, std::string source) {
    const double eps = grid.epsilon();
    return {PeriodicField::from_sites(grid, [&](int l) { return fn(eps * l); }), std::move(source)};
  }

  static DeadLoad cosine(ChainGrid grid) {
    return sampled(grid, [](double x) { return std::cos(2.0 * std::numbers::pi * x); }, "cos(2 pi x)");
  }
};

namespace detail {

inline void require_zero_mean(const PeriodicField& v, const char* who, double rel = 1e-12) {
  const double scale = std::max(v.max_abs(), std::numeric_limits<double>::min());
  if (std::abs(v.mean()) > rel * scale)
    throw std::invalid_argument(std::string(who) + ": field must have zero mean (mean = " +
                                std::to_string(v.mean()) + ")");
}

/// (D^T w)_l = w_l - w_{l+1}: maps strain-space stresses to atom forces.
template <class Real>
std::vector<Real> divergence(std::span<const Real> w) {
  const int n = static_cast<int>(w.size());
  std::vector<Real> out(n);
  for (int i = 0; i < n; ++i) out[i] = w[i] - w[(i + 1) % n];
  return out;
}

/// H u evaluated as D^T (S Du), which avoids the 1/eps cancellation of the
/// displacement stencil.
inline std::vector<double> apply_via_strain(const SymmetricBandedOperator& S, const PeriodicField& u) {
  const PeriodicField du = diff(u, 1);
  const std::vector<double> s = S.apply<double>(du.values());
  return divergence<double>(s);
}

using ExtVector = std::vector<long double>;

inline void remove_mean(ExtVector& v) {
  long double m = 0.0L;
  for (long double x : v) m += x;
  m /= static_cast<long double>(v.size());
  for (long double& x : v) x -= m;
}

/// Strain v = Du of the solution of H u = eps f, from the well-conditioned
/// strain system: D^T(S v) = eps f means S v = w + c with w_{l+1} = w_l - eps f_l,
/// and the constant c is fixed by sum(v) = 0. Solved as (P S P + c 11^T/n) v = P w
/// in double, then refined with residuals in extended precision so that
/// differences of nearby solutions keep their digits.
inline ExtVector solve_strain(const SymmetricBandedOperator& S, const PeriodicField& f) {
  const ChainGrid& g = S.grid();
  const int n = g.size();
  double shift = 0.0;
  const Eigen::MatrixXd M = deflated_strain_matrix(S, &shift);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("solve_linearized: operator is not positive definite on zero-mean fields (N=" +
                              std::to_string(g.N()) + ")");
  ExtVector w(n);
  w[0] = 0.0L;
  for (int i = 0; i + 1 < n; ++i) w[i + 1] = w[i] - static_cast<long double>(g.epsilon()) * f[i];
  remove_mean(w);

  ExtVector v(n, 0.0L);
  Eigen::VectorXd r(n);
  for (int it = 0; it < 4; ++it) {
    const ExtVector sv = S.apply<long double>(v);
    ExtVector res(n);
    for (int i = 0; i < n; ++i) res[i] = w[i] - sv[i];
    remove_mean(res);
    for (int i = 0; i < n; ++i) r(i) = static_cast<double>(res[i]);
    const Eigen::VectorXd dv = llt.solve(r);
    for (int i = 0; i < n; ++i) v[i] += dv(i);
    remove_mean(v);
  }
  return v;
}

}  // namespace detail

/// Zero-mean u with H u = eps f, where S is the strain Hessian of the model.
inline PeriodicField solve_linearized(const SymmetricBandedOperator& S, const PeriodicField& f) {
  detail::require_zero_mean(f, "solve_linearized");
  if (S.half_bandwidth() != 3) throw std::invalid_argument("solve_linearized: expected a strain Hessian");
  const detail::ExtVector v = detail::solve_strain(S, f);
  return displacement_from_strain(PeriodicField(S.grid(), std::vector<double>(v.begin(), v.end()), FieldKind::Strain));
}

inline PeriodicField solve_linearized(ModelKind model, const RegionDecomposition* region,
                                      const EAMPotential& p, double F, const DeadLoad& load) {
  return solve_linearized(strain_hessian(model, region, p, load.f.grid(), F), load.f);
}

/// ||H u - eps f|| / ||eps f|| in the plain Euclidean norm, H the displacement Hessian.
inline double solve_residual(const SymmetricBandedOperator& H, const PeriodicField& u,
                             const PeriodicField& f) {
  const auto hu = H.apply<double>(u.values());
  const double eps = H.grid().epsilon();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < H.size(); ++i) {
    const double b = eps * f[i];
    num += (hu[i] - b) * (hu[i] - b);
    den += b * b;
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

/// T = (H_qnl - H_a) u_a.
inline PeriodicField consistency_residual(const RegionDecomposition& region, const EAMPotential& p,
                                          double F, const PeriodicField& u_a) {
  detail::require_zero_mean(u_a, "consistency_residual");
  const ChainGrid& g = u_a.grid();
  const SymmetricBandedOperator dS = strain_hessian(ModelKind::QNL, &region, p, g, F) -
                                     strain_hessian(ModelKind::Atomistic, nullptr, p, g, F);
  return PeriodicField(g, detail::apply_via_strain(dS, u_a), FieldKind::Residual);
}

/// sup_w <T, w> / ||Dw||, computed from the exact solution of L z = T: with
/// v = Dz the system reads v_l - v_{l+1} = T_l, and the value is ||v||.
inline double negative_norm(const PeriodicField& T) {
  detail::require_zero_mean(T, "negative_norm");
  const ChainGrid& g = T.grid();
  const int n = g.size();
  std::vector<double> v(n);
  v[0] = 0.0;
  for (int i = 0; i + 1 < n; ++i) v[i + 1] = v[i] - T[i];
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s = 0.0;
  for (double& x : v) {
    x -= m;
    s += x * x;
  }
  return std::sqrt(g.epsilon() * s);
}

/// Splits T into the rows with |l| <= K + 7 (transition zone) and the rest.
/// Each part is measured after projection to zero mean, which does not change
/// its action on zero-mean w; by the triangle inequality the two negative norms
/// bound the norm of T.
inline std::pair<double, double> split_negative_norm(const RegionDecomposition& region,
                                                     const PeriodicField& T) {
  const int reach = region.K() + 7;
  const PeriodicField inner = PeriodicField::from_sites(
      T.grid(), [&](int l) { return std::abs(l) <= reach ? T.at(l) : 0.0; });
  const PeriodicField outer = T - inner;
  return {negative_norm(project_zero_mean(inner)), negative_norm(project_zero_mean(outer))};
}

struct ConvergenceRecord {
  int N = 0;
  int K = 0;
  double epsilon = 0.0;
  double error_H1 = 0.0;             ///< ||Du_a - Du_qnl||
  double consistency_negnorm = 0.0;  ///< negative norm of T_qnl
  double negnorm_interface = 0.0;    ///< negative norm of T on |l| <= K + 7
  double negnorm_continuum = 0.0;    ///< negative norm of T on |l| > K + 7
  double D3_continuum = 0.0;         ///< ||D3 u_a|| over the continuum sites
  double D2_interface_max = 0.0;     ///< max |D2 u_a| over the interface sites
  double M_C = 0.0;                  ///< negnorm_continuum / (eps^2 D3_continuum)
  double M_I = 0.0;                  ///< negnorm_interface / (eps^{3/2} D2_interface_max)
  double A_F = 0.0;                  ///< continuum modulus at F
  double lambda_min_qnl = 0.0;       ///< smallest QNL stability eigenvalue at (F, N)
  double error_equation_residual = 0.0;  ///< |H_qnl(u_a - u_qnl) - T| / |T|
  double runtime_ms = 0.0;           ///< wall time; not part of any byte-compared output
};

struct RateFit {
  double slope_all = 0.0;
  double slope_tail = 0.0;  ///< excludes the coarsest point
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

/// Slopes over all points and over all but the first (coarsest) point.
inline RateFit fit_rate(std::span<const double> eps, std::span<const double> err) {
  RateFit r;
  r.slope_all = loglog_slope(eps, err);
  r.slope_tail = eps.size() > 2 ? loglog_slope(eps.subspan(1), err.subspan(1)) : r.slope_all;
  return r;
}

using KRule = std::function<int(int)>;
using LoadGenerator = std::function<DeadLoad(ChainGrid)>;

inline KRule fixed_K(int K) {
  return [K](int) { return K; };
}

/// K = floor(N^theta).
inline KRule power_K(double theta) {
  return [theta](int N) { return static_cast<int>(std::floor(std::pow(static_cast<double>(N), theta))); };
}

/// One study point: atomistic and QNL solves at (N, K) plus the consistency data.
inline ConvergenceRecord convergence_point(const EAMPotential& p, double F, const LoadGenerator& load,
                                           int N, int K) {
  const auto t0 = std::chrono::steady_clock::now();
  const ChainGrid grid(N);
  const RegionDecomposition region(N, K);
  const DeadLoad f = load(grid);
  const SymmetricBandedOperator Sa = strain_hessian(ModelKind::Atomistic, nullptr, p, grid, F);
  const SymmetricBandedOperator Sq = strain_hessian(ModelKind::QNL, &region, p, grid, F);
  const detail::ExtVector va = detail::solve_strain(Sa, f.f);
  const detail::ExtVector vq = detail::solve_strain(Sq, f.f);
  const int n = grid.size();
  const PeriodicField ua = displacement_from_strain(
      PeriodicField(grid, std::vector<double>(va.begin(), va.end()), FieldKind::Strain));

  ConvergenceRecord rec;
  rec.N = N;
  rec.K = K;
  rec.epsilon = grid.epsilon();
  const double eps = grid.epsilon();

  // error and error equation in extended precision:
  //   H_qnl e = D^T S_q (va - vq),  T = D^T (S_q - S_a) va
  detail::ExtVector ev(n);
  long double e2 = 0.0L;
  for (int i = 0; i < n; ++i) {
    ev[i] = va[i] - vq[i];
    e2 += ev[i] * ev[i];
  }
  rec.error_H1 = static_cast<double>(std::sqrt(static_cast<long double>(eps) * e2));
  const SymmetricBandedOperator dS = Sq - Sa;
  const detail::ExtVector sa = dS.apply<long double>(va);
  const detail::ExtVector Text = detail::divergence<long double>(sa);
  const detail::ExtVector sq = Sq.apply<long double>(ev);
  const detail::ExtVector lhs = detail::divergence<long double>(sq);
  long double num = 0.0L, den = 0.0L;
  for (int i = 0; i < n; ++i) {
    num += (lhs[i] - Text[i]) * (lhs[i] - Text[i]);
    den += Text[i] * Text[i];
  }
  rec.error_equation_residual =
      static_cast<double>(den > 0.0L ? std::sqrt(num / den) : std::sqrt(num));

  const PeriodicField T(grid, std::vector<double>(Text.begin(), Text.end()), FieldKind::Residual);
  rec.consistency_negnorm = negative_norm(project_zero_mean(T));
  std::tie(rec.negnorm_interface, rec.negnorm_continuum) = split_negative_norm(region, T);
  const auto cont = region.continuum_sites();
  const auto intf = region.interface_sites();
  rec.D3_continuum = norm_region(diff(ua, 3), cont, RegionNorm::L2eps);
  rec.D2_interface_max = norm_region(diff(ua, 2), intf, RegionNorm::Max);
  rec.M_C = rec.negnorm_continuum / (eps * eps * rec.D3_continuum);
  rec.M_I = rec.negnorm_interface / (std::pow(eps, 1.5) * rec.D2_interface_max);
  rec.A_F = coefficients(p, F).A;
  rec.lambda_min_qnl = stability_spectrum(ModelKind::QNL, &region, p, F, N).front();
  rec.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

struct ConvergenceStudy {
  std::vector<ConvergenceRecord> records;
  RateFit error_rate;
  RateFit negnorm_rate;
};

inline ConvergenceStudy convergence_study(const EAMPotential& p, double F, const LoadGenerator& load,
                                          const KRule& K_rule, std::span<const int> N_list) {
  ConvergenceStudy st;
  std::vector<double> eps, err, neg;
  for (int N : N_list) {
    st.records.push_back(convergence_point(p, F, load, N, K_rule(N)));
    eps.push_back(st.records.back().epsilon);
    err.push_back(st.records.back().error_H1);
    neg.push_back(st.records.back().consistency_negnorm);
  }
  if (N_list.size() >= 2) {
    st.error_rate = fit_rate(eps, err);
    st.negnorm_rate = fit_rate(eps, neg);
  }
  return st;
}

/// The embedding/pair coefficient of the continuum term of the consistency bound:
/// G''(rho'^2 + 12 rho' rho'_2 + 20 rho'_2^2) - 2 G' rho''_2 + |phi''_2|.
inline double continuum_consistency_constant(const EAMPotential& p, double F) {
  const UniformState s = uniform_state(p, F);
  const double r1 = s.rho1_F, r2 = s.rho1_2F;
  return s.G2 * (r1 * r1 + 12.0 * r1 * r2 + 20.0 * r2 * r2) - 2.0 * s.G1 * s.rho2_2F +
         std::abs(s.phi2_2F);
}

}  // namespace qnl_eam
