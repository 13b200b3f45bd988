#pragma once

// Numerical self-checks shared by the test suite and the `validate` command:
// finite-difference derivative checks, the ghost-force measure and the
// difference-operator identities.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "qnl_eam/models.hpp"

namespace qnl_eam {

/// Zero-mean displacement whose strain perturbations are uniform in [-amp, amp]
/// (then centred so they sum to zero).
template <class Rng>
PeriodicField random_displacement(ChainGrid grid, double amp, Rng& rng) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> s(grid.size());
  for (double& x : s) x = dist(rng);
  double m = 0.0;
  for (double x : s) m += x;
  m /= grid.size();
  for (double& x : s) x -= m;
  return displacement_from_strain(PeriodicField(grid, std::move(s), FieldKind::Strain));
}

/// Mismatch between <g(y), w> and the central difference of the energy along
/// w, relative to sum_l |g_l w_l| (a near-zero pairing would otherwise turn
/// roundoff in the energy difference into a large relative error).
inline double fd_gradient_error(ModelKind model, const RegionDecomposition* region,
                                const EAMPotential& p, const Deformation& y,
                                const PeriodicField& w, double h = 1e-5) {
  const Deformation yp{y.F, y.u + h * w};
  const Deformation ym{y.F, y.u - h * w};
  const double fd = (energy(model, region, p, yp) - energy(model, region, p, ym)) / (2.0 * h);
  const PeriodicField g = gradient(model, region, p, y);
  double gw = 0.0, scale = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    gw += g[i] * w[i];
    scale += std::abs(g[i] * w[i]);
  }
  return std::abs(fd - gw) / std::max({std::abs(fd), scale, 1e-300});
}

/// max_l |(g(y_F + h w) - g(y_F - h w)) / 2h - (H w)_l| / max_l |(H w)_l|.
inline double fd_hessian_error(ModelKind model, const RegionDecomposition* region,
                               const EAMPotential& p, double F, const PeriodicField& w,
                               double h = 1e-5) {
  const ChainGrid& g = w.grid();
  const PeriodicField zero = PeriodicField::zeros(g, FieldKind::Displacement);
  const PeriodicField gp = gradient(model, region, p, {F, zero + h * w});
  const PeriodicField gm = gradient(model, region, p, {F, zero - h * w});
  const PeriodicField hw = hessian(model, region, p, g, F).apply(w);
  double num = 0.0;
  for (int i = 0; i < g.size(); ++i) num = std::max(num, std::abs((gp[i] - gm[i]) / (2.0 * h) - hw[i]));
  return num / std::max(hw.max_abs(), 1e-300);
}

struct GhostForceReport {
  double max_force = 0.0;         ///< max_l |g_l| at y_F
  double largest_contribution = 0.0;  ///< largest single term entering any g_l
  double relative() const { return largest_contribution > 0.0 ? max_force / largest_contribution : max_force; }
};

/// Forces of the model at the uniform state y_F.
inline GhostForceReport ghost_force(ModelKind model, const RegionDecomposition* region,
                                    const EAMPotential& p, ChainGrid grid, double F) {
  GhostForceReport rep;
  rep.max_force = gradient(model, region, p, Deformation::uniform(grid, F)).max_abs();
  // each g_l = sigma_l - sigma_{l+1}; the addends of sigma are the individual terms
  const std::vector<double> r(grid.size(), F);
  const detail::TermList t = detail::terms(model, region, grid);
  double m = 0.0;
  for (const detail::EmbedTerm& et : t.embed) {
    const double gp = et.weight * p.embedding.d1(detail::embed_density(p, et, grid, r));
    for (int k = 0; k < et.count; ++k) {
      const detail::EmbedPart& part = et.parts[k];
      for (int j = 0; j < part.arg.count; ++j)
        m = std::max(m, std::abs(gp * part.mult * p.density.d1(part.arg.value(grid, r)) * part.arg.coeff[j]));
    }
  }
  for (const detail::PairTerm& pt : t.pair)
    for (int j = 0; j < pt.arg.count; ++j)
      m = std::max(m, std::abs(pt.weight * p.pair.d1(pt.arg.value(grid, r)) * pt.arg.coeff[j]));
  rep.largest_contribution = m;
  return rep;
}

/// Relative residuals of the four strain identities, each summed over a period:
///   (u'_l + u'_{l+1})^2,
///   (u'_l + u'_{l+1} + u'_{l+2})^2,
///   2 (u'_l + u'_{l+1}) (u'_{l-1} + u'_l + u'_{l+1} + u'_{l+2}),
///   (u'_l + ... + u'_{l+3})^2,
/// each against its expansion in eps-weighted squares of higher differences.
inline std::array<double, 4> identity_residuals(const PeriodicField& u) {
  const ChainGrid& g = u.grid();
  const double e = g.epsilon(), e2 = e * e, e4 = e2 * e2, e6 = e4 * e2;
  const PeriodicField d1 = diff(u, 1), d2 = diff(u, 2), d3 = diff(u, 3), d4 = diff(u, 4);
  std::array<double, 4> lhs{}, rhs{}, scale{};
  auto acc = [&](int k, double l, std::initializer_list<double> parts) {
    lhs[k] += l;
    for (double x : parts) {
      rhs[k] += x;
      scale[k] += std::abs(x);
    }
  };
  for (int l = g.first_site(); l <= g.last_site(); ++l) {
    auto a = [&](int k) { return d1.at(l + k); };
    auto b = [&](int k) { return d2.at(l + k); };
    auto c = [&](int k) { return d3.at(l + k); };
    const double s2 = a(0) + a(1);
    acc(0, s2 * s2, {2 * a(0) * a(0), 2 * a(1) * a(1), -e2 * b(1) * b(1)});
    const double s3 = a(0) + a(1) + a(2);
    acc(1, s3 * s3,
        {3 * a(0) * a(0), 3 * a(1) * a(1), 3 * a(2) * a(2), -3 * e2 * b(1) * b(1),
         -3 * e2 * b(2) * b(2), e4 * c(2) * c(2)});
    acc(2, 2 * s2 * (a(-1) + a(0) + a(1) + a(2)),
        {2 * a(-1) * a(-1), 6 * a(0) * a(0), 6 * a(1) * a(1), 2 * a(2) * a(2),
         -3 * e2 * b(0) * b(0), -6 * e2 * b(1) * b(1), -3 * e2 * b(2) * b(2),
         e4 * c(1) * c(1), e4 * c(2) * c(2)});
    const double s4 = a(0) + a(1) + a(2) + a(3);
    acc(3, s4 * s4,
        {4 * a(0) * a(0), 4 * a(1) * a(1), 4 * a(2) * a(2), 4 * a(3) * a(3),
         -6 * e2 * b(1) * b(1), -8 * e2 * b(2) * b(2), -6 * e2 * b(3) * b(3),
         4 * e4 * c(2) * c(2), 4 * e4 * c(3) * c(3), -e6 * d4.at(l + 3) * d4.at(l + 3)});
  }
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = std::abs(lhs[k] - rhs[k]) / std::max(scale[k], 1e-300);
  return out;
}

}  // namespace qnl_eam
