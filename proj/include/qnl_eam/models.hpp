#pragma once

// Atomistic, QNL and QCL energies of the periodic chain with their strain
// derivatives. Every per-atom energy is written as a list of terms
//   pair:  w * phi(x)
//   embed: w * G(sum_p m_p rho(x_p))
// where each argument x is a linear combination of at most two strains r_m.
// Energies, gradients and Hessians all come from the same term lists.

#include <array>
#include <cassert>
#include <stdexcept>
#include <vector>

#include "qnl_eam/banded_operator.hpp"
#include "qnl_eam/lattice.hpp"
#include "qnl_eam/potential.hpp"
#include "qnl_eam/region.hpp"

namespace qnl_eam {

enum class ModelKind { Atomistic, QNL, QCL };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Atomistic: return "atomistic";
    case ModelKind::QNL: return "qnl";
    case ModelKind::QCL: return "qcl";
  }
  return "?";
}

/// y_l = F x_l + u_l; the zero-mean displacement u carries the periodic part.
struct Deformation {
  double F;
  PeriodicField u;

  static Deformation uniform(ChainGrid grid, double F) {
    return {F, PeriodicField::zeros(grid, FieldKind::Displacement)};
  }

  const ChainGrid& grid() const noexcept { return u.grid(); }

  /// r_l = F + Du_l.
  std::vector<double> strains() const {
    const PeriodicField du = diff(u, 1);
    std::vector<double> r(du.values().begin(), du.values().end());
    for (double& x : r) x += F;
    return r;
  }
};

enum class DensityKind { a, c, qnl };

namespace detail {

/// sum_j coeff_j * r_{site_j}, at most two strains.
struct StrainArg {
  std::array<int, 2> site{};
  std::array<double, 2> coeff{};
  int count = 0;

  double value(const ChainGrid& g, std::span<const double> r) const {
    double x = 0.0;
    for (int j = 0; j < count; ++j) x += coeff[j] * r[g.index(site[j])];
    return x;
  }
};

inline StrainArg single(int m, double c = 1.0) { return {{m, 0}, {c, 0.0}, 1}; }
inline StrainArg pair_sum(int m1, int m2) { return {{m1, m2}, {1.0, 1.0}, 2}; }

struct PairTerm {
  double weight;
  StrainArg arg;
};

struct EmbedPart {
  double mult;
  StrainArg arg;
};

struct EmbedTerm {
  double weight;
  std::array<EmbedPart, 4> parts{};
  int count = 0;
};

struct TermList {
  std::vector<PairTerm> pair;
  std::vector<EmbedTerm> embed;
};

inline EmbedTerm atomistic_density_term(double w, int l) {
  return {w,
          {EmbedPart{1.0, single(l)}, EmbedPart{1.0, pair_sum(l, l - 1)},
           EmbedPart{1.0, single(l + 1)}, EmbedPart{1.0, pair_sum(l + 1, l + 2)}},
          4};
}

inline EmbedTerm continuum_density_term(double w, int m) {
  return {w, {EmbedPart{2.0, single(m)}, EmbedPart{2.0, single(m, 2.0)}}, 2};
}

// QNL density built from strains m and m + dir (dir = -1 right side, +1 mirrored).
inline EmbedTerm qnl_density_term(double w, int m, int dir) {
  return {w, {EmbedPart{2.0, single(m)}, EmbedPart{2.0, pair_sum(m, m + dir)}}, 2};
}

inline void add_atomistic(TermList& t, int l) {
  t.embed.push_back(atomistic_density_term(1.0, l));
  t.pair.push_back({0.5, single(l)});
  t.pair.push_back({0.5, pair_sum(l, l - 1)});
  t.pair.push_back({0.5, single(l + 1)});
  t.pair.push_back({0.5, pair_sum(l + 1, l + 2)});
}

inline void add_continuum(TermList& t, int l) {
  t.embed.push_back(continuum_density_term(0.5, l));
  t.embed.push_back(continuum_density_term(0.5, l + 1));
  t.pair.push_back({0.5, single(l)});
  t.pair.push_back({0.5, single(l, 2.0)});
  t.pair.push_back({0.5, single(l + 1)});
  t.pair.push_back({0.5, single(l + 1, 2.0)});
}

// Transition atom a = K+1 or K+2 on the right. For l = -a the strain indices
// are reflected by m -> 1 - m.
inline void add_qnl(TermList& t, int l) {
  if (l > 0) {
    t.embed.push_back(qnl_density_term(0.5, l, -1));
    t.embed.push_back(continuum_density_term(0.5, l + 1));
    t.pair.push_back({0.5, single(l)});
    t.pair.push_back({0.5, single(l + 1)});
    t.pair.push_back({0.5, pair_sum(l, l - 1)});
    t.pair.push_back({0.5, single(l + 1, 2.0)});
  } else {
    const int m = l + 1;  // = 1 - a
    t.embed.push_back(qnl_density_term(0.5, m, +1));
    t.embed.push_back(continuum_density_term(0.5, l));
    t.pair.push_back({0.5, single(m)});
    t.pair.push_back({0.5, single(l)});
    t.pair.push_back({0.5, pair_sum(m, m + 1)});
    t.pair.push_back({0.5, single(l, 2.0)});
  }
}

/// Terms of one atom.
inline void add_atom(TermList& t, ModelKind model, const RegionDecomposition* region, int l) {
  switch (model) {
    case ModelKind::Atomistic: add_atomistic(t, l); return;
    case ModelKind::QCL: add_continuum(t, l); return;
    case ModelKind::QNL:
      switch (region->kind(l)) {
        case SiteKind::Atomistic: add_atomistic(t, l); return;
        case SiteKind::QuasiNonlocal: add_qnl(t, l); return;
        case SiteKind::Continuum: add_continuum(t, l); return;
      }
  }
}

inline TermList terms(ModelKind model, const RegionDecomposition* region, ChainGrid grid) {
  if (model == ModelKind::QNL) {
    if (region == nullptr) throw std::invalid_argument("QNL model needs a region decomposition");
    if (!(region->grid() == grid)) throw std::invalid_argument("region and deformation grids differ");
  }
  TermList t;
  t.pair.reserve(static_cast<std::size_t>(grid.size()) * 4);
  t.embed.reserve(static_cast<std::size_t>(grid.size()) * 2);
  for (int l = grid.first_site(); l <= grid.last_site(); ++l) add_atom(t, model, region, l);
  return t;
}

inline double embed_density(const EAMPotential& p, const EmbedTerm& e, const ChainGrid& g,
                            std::span<const double> r) {
  double s = 0.0;
  for (int k = 0; k < e.count; ++k) s += e.parts[k].mult * p.density(e.parts[k].arg.value(g, r));
  return s;
}

/// Energy per period divided by eps (sum of per-atom energies).
inline double energy_sum(const TermList& t, const EAMPotential& p, const ChainGrid& g,
                         std::span<const double> r) {
  double e = 0.0;
  for (const EmbedTerm& et : t.embed) e += et.weight * p.embedding(embed_density(p, et, g, r));
  for (const PairTerm& pt : t.pair) e += pt.weight * p.pair(pt.arg.value(g, r));
  return e;
}

/// sigma_m = d(energy / eps) / d r_m.
inline std::vector<double> strain_gradient(const TermList& t, const EAMPotential& p,
                                           const ChainGrid& g, std::span<const double> r) {
  std::vector<double> sigma(g.size(), 0.0);
  for (const EmbedTerm& et : t.embed) {
    const double gp = et.weight * p.embedding.d1(embed_density(p, et, g, r));
    for (int k = 0; k < et.count; ++k) {
      const EmbedPart& part = et.parts[k];
      const double c = gp * part.mult * p.density.d1(part.arg.value(g, r));
      for (int j = 0; j < part.arg.count; ++j) sigma[g.index(part.arg.site[j])] += c * part.arg.coeff[j];
    }
  }
  for (const PairTerm& pt : t.pair) {
    const double c = pt.weight * p.pair.d1(pt.arg.value(g, r));
    for (int j = 0; j < pt.arg.count; ++j) sigma[g.index(pt.arg.site[j])] += c * pt.arg.coeff[j];
  }
  return sigma;
}

/// S_mn = d^2(energy / eps) / d r_m d r_n as a stencil of half-bandwidth 3.
/// Sites inside a term are unwrapped, so offsets are exact.
inline SymmetricBandedOperator strain_hessian(const TermList& t, const EAMPotential& p,
                                              const ChainGrid& g, std::span<const double> r) {
  SymmetricBandedOperator S(g, 3);
  auto scatter = [&](int a, int b, double v) {
    // one entry per unordered pair; diagonal entries once
    if (a > b) std::swap(a, b);
    const int d = b - a;
    assert(d <= 3);
    S.band(g.index(a), d) += v;
  };

  for (const EmbedTerm& et : t.embed) {
    // local sites of this term
    std::array<int, 8> sites{};
    int ns = 0;
    auto local = [&](int s) {
      for (int i = 0; i < ns; ++i)
        if (sites[i] == s) return i;
      sites[ns] = s;
      return ns++;
    };
    std::array<double, 8> ds{};
    std::array<std::array<double, 8>, 8> h{};
    double rho_bar = 0.0;
    for (int k = 0; k < et.count; ++k) {
      const EmbedPart& part = et.parts[k];
      const double x = part.arg.value(g, r);
      rho_bar += part.mult * p.density(x);
      const double d1 = part.mult * p.density.d1(x);
      const double d2 = part.mult * p.density.d2(x);
      for (int i = 0; i < part.arg.count; ++i) {
        const int li = local(part.arg.site[i]);
        ds[li] += d1 * part.arg.coeff[i];
        for (int j = 0; j < part.arg.count; ++j) {
          const int lj = local(part.arg.site[j]);
          h[li][lj] += d2 * part.arg.coeff[i] * part.arg.coeff[j];
        }
      }
    }
    const double G1 = et.weight * p.embedding.d1(rho_bar);
    const double G2 = et.weight * p.embedding.d2(rho_bar);
    for (int i = 0; i < ns; ++i)
      for (int j = i; j < ns; ++j) {
        if (sites[i] == sites[j]) continue;
        scatter(sites[i], sites[j], G2 * ds[i] * ds[j] + G1 * h[i][j]);
      }
    for (int i = 0; i < ns; ++i) scatter(sites[i], sites[i], G2 * ds[i] * ds[i] + G1 * h[i][i]);
  }
  for (const PairTerm& pt : t.pair) {
    const double c = pt.weight * p.pair.d2(pt.arg.value(g, r));
    const StrainArg& a = pt.arg;
    if (a.count == 2 && a.site[0] != a.site[1]) {
      scatter(a.site[0], a.site[1], c * a.coeff[0] * a.coeff[1]);
      scatter(a.site[0], a.site[0], c * a.coeff[0] * a.coeff[0]);
      scatter(a.site[1], a.site[1], c * a.coeff[1] * a.coeff[1]);
    } else {
      double cc = 0.0;
      for (int j = 0; j < a.count; ++j) cc += a.coeff[j];
      scatter(a.site[0], a.site[0], c * cc * cc);
    }
  }
  return S;
}

/// Displacement Hessian from the strain stencil: H = D^T S D / eps in stencil
/// form, half-bandwidth 4.
inline SymmetricBandedOperator displacement_hessian(const SymmetricBandedOperator& S) {
  const ChainGrid& g = S.grid();
  const int n = g.size();
  const double inv_eps = g.N();
  // stencil lookup of S at (i, i + e), e in [-3, 3]
  auto s = [&](int i, int e) {
    if (e > 3 || e < -3) return 0.0;
    if (e >= 0) return S.band(((i % n) + n) % n, e);
    return S.band((((i + e) % n) + n) % n, -e);
  };
  SymmetricBandedOperator H(g, 4);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d <= 4; ++d)
      H.band(a, d) = inv_eps * (s(a, d) - s(a + 1, d - 1) - s(a, d + 1) + s(a + 1, d));
  return H;
}

}  // namespace detail

/// Total electron density at atom l of the given kind.
inline double electron_density(DensityKind kind, const EAMPotential& p, const Deformation& y,
                               int l) {
  const ChainGrid& g = y.grid();
  const std::vector<double> r = y.strains();
  auto rs = [&](int m) { return r[g.index(m)]; };
  switch (kind) {
    case DensityKind::a:
      return p.density(rs(l)) + p.density(rs(l) + rs(l - 1)) + p.density(rs(l + 1)) +
             p.density(rs(l + 1) + rs(l + 2));
    case DensityKind::c:
      return 2.0 * p.density(rs(l)) + 2.0 * p.density(2.0 * rs(l));
    case DensityKind::qnl:
      return 2.0 * p.density(rs(l)) + 2.0 * p.density(rs(l) + rs(l - 1));
  }
  return 0.0;
}

/// Interaction energy per period. `region` is used by the QNL model only.
inline double energy(ModelKind model, const RegionDecomposition* region, const EAMPotential& p,
                     const Deformation& y) {
  const ChainGrid& g = y.grid();
  const std::vector<double> r = y.strains();
  return g.epsilon() * detail::energy_sum(detail::terms(model, region, g), p, g, r);
}

/// g with <g, w> = d energy(y)[w] for zero-mean w.
inline PeriodicField gradient(ModelKind model, const RegionDecomposition* region,
                              const EAMPotential& p, const Deformation& y) {
  const ChainGrid& g = y.grid();
  const std::vector<double> r = y.strains();
  const std::vector<double> sigma =
      detail::strain_gradient(detail::terms(model, region, g), p, g, r);
  const int n = g.size();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = sigma[i] - sigma[(i + 1) % n];
  return PeriodicField(g, std::move(out), FieldKind::Residual);
}

/// Second variation at the uniform state y_F.
inline SymmetricBandedOperator hessian(ModelKind model, const RegionDecomposition* region,
                                       const EAMPotential& p, ChainGrid grid, double F) {
  const std::vector<double> r(grid.size(), F);
  return detail::displacement_hessian(
      detail::strain_hessian(detail::terms(model, region, grid), p, grid, r));
}

/// Strain-space second variation at y_F: <H u, u> = eps * Du^T S Du.
inline SymmetricBandedOperator strain_hessian(ModelKind model, const RegionDecomposition* region,
                                              const EAMPotential& p, ChainGrid grid, double F) {
  const std::vector<double> r(grid.size(), F);
  return detail::strain_hessian(detail::terms(model, region, grid), p, grid, r);
}

}  // namespace qnl_eam
