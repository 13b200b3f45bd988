#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qnl_eam/checks.hpp"
#include "qnl_eam/lattice.hpp"

using namespace qnl_eam;

namespace {

PeriodicField random_field(ChainGrid g, std::mt19937_64& rng, FieldKind kind = FieldKind::Displacement) {
  std::normal_distribution<double> nd;
  return PeriodicField::from_sites(g, [&](int) { return nd(rng); }, kind);
}

}  // namespace

TEST(ChainGrid, RejectsSmallN) {
  EXPECT_THROW(ChainGrid(3), std::invalid_argument);
  EXPECT_NO_THROW(ChainGrid(4));
}

TEST(ChainGrid, GeometryAndWrap) {
  const ChainGrid g(8);
  EXPECT_EQ(g.size(), 16);
  EXPECT_EQ(g.epsilon() * g.N(), 1.0);
  EXPECT_EQ(g.first_site(), -7);
  EXPECT_EQ(g.last_site(), 8);
  EXPECT_EQ(g.index(-7), 0);
  EXPECT_EQ(g.index(8), 15);
  EXPECT_EQ(g.index(9), g.index(-7));
  EXPECT_EQ(g.index(-8), g.index(8));
  for (int i = 0; i < g.size(); ++i) EXPECT_EQ(g.index(g.site(i)), i);
}

TEST(PeriodicField, LengthMustMatch) {
  EXPECT_THROW(PeriodicField(ChainGrid(4), std::vector<double>(7, 0.0)), std::invalid_argument);
}

TEST(PeriodicField, DisplacementIsZeroMean) {
  std::mt19937_64 rng(1);
  std::vector<double> v(16);
  for (double& x : v) x = 3.0 + std::uniform_real_distribution<double>(0, 1)(rng);
  const PeriodicField u(ChainGrid(8), v, FieldKind::Displacement);
  EXPECT_LE(std::abs(u.mean()), 1e-14 * u.max_abs());
  const PeriodicField gen(ChainGrid(8), v);
  EXPECT_GT(gen.mean(), 3.0);
}

TEST(Diff, ZeroField) {
  const auto z = PeriodicField::zeros(ChainGrid(8));
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(diff(z, k).max_abs(), 0.0);
}

TEST(Diff, OrderOutOfRange) {
  const auto z = PeriodicField::zeros(ChainGrid(8));
  EXPECT_THROW(diff(z, 0), std::invalid_argument);
  EXPECT_THROW(diff(z, 5), std::invalid_argument);
}

TEST(Diff, SawtoothHasOneJump) {
  const ChainGrid g(8);
  const double c = 1.7;
  const auto u = PeriodicField::from_sites(g, [&](int l) { return c * g.epsilon() * l; }, FieldKind::Displacement);
  const auto du = diff(u, 1);
  int jumps = 0;
  for (int l = g.first_site(); l <= g.last_site(); ++l) {
    if (l == g.first_site()) {
      ++jumps;
      EXPECT_NEAR(du.at(l), c * (1.0 - 2.0 * g.N()), 1e-12);
    } else {
      EXPECT_NEAR(du.at(l), c, 1e-12);
    }
  }
  EXPECT_EQ(jumps, 1);
  EXPECT_EQ(du.kind(), FieldKind::Strain);
}

TEST(Diff, ComposeMatchesDirect) {
  std::mt19937_64 rng(2);
  const auto u = random_field(ChainGrid(8), rng);
  for (int k = 2; k <= 4; ++k) {
    const auto a = diff(diff(u, k - 1), 1);
    const auto b = diff(u, k);
    for (int i = 0; i < u.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-14 * std::max(1.0, std::abs(b[i])));
  }
}

TEST(Diff, FirstDifferenceSumsToZero) {
  std::mt19937_64 rng(3);
  const auto u = random_field(ChainGrid(16), rng);
  EXPECT_NEAR(diff(u, 1).sum(), 0.0, 1e-12);
}

TEST(Diff, IsLinear) {
  std::mt19937_64 rng(4);
  const ChainGrid g(8);
  const auto u = random_field(g, rng), v = random_field(g, rng);
  const double a = 0.3, b = -2.1;
  for (int k = 1; k <= 4; ++k) {
    const auto lhs = diff(a * u + b * v, k);
    const auto rhs = a * diff(u, k) + b * diff(v, k);
    for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12 * std::max(1.0, std::abs(rhs[i])));
  }
}

TEST(Diff, SummationByPartsGivesMinusSecondDifference) {
  // assemble the bilinear form eps sum Du Dw at N = 8 and compare with -D2
  const ChainGrid g(8);
  const int n = g.size();
  for (int j = 0; j < n; ++j) {
    std::vector<double> ej(n, 0.0);
    ej[j] = 1.0;
    const PeriodicField wj(g, ej);
    const auto d2 = diff(wj, 2);
    for (int i = 0; i < n; ++i) {
      std::vector<double> ei(n, 0.0);
      ei[i] = 1.0;
      const PeriodicField wi(g, ei);
      const auto a = diff(wi, 1), b = diff(wj, 1);
      double form = 0.0;
      for (int k = 0; k < n; ++k) form += g.epsilon() * a[k] * b[k];
      // D2 is a backward difference, so row i pairs with D2 at site i + 1
      EXPECT_NEAR(form, -g.epsilon() * d2.at(g.site(i) + 1), 1e-12);
    }
  }
}

TEST(Norms, L2eps) {
  const ChainGrid g(16);
  EXPECT_NEAR(norm_l2eps(PeriodicField(g, std::vector<double>(32, 1.0))), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(norm_l2eps(PeriodicField::zeros(g)), 0.0);
  const auto alt = PeriodicField::from_sites(g, [](int l) { return (l % 2 == 0 ? 1.0 : -1.0) / std::sqrt(2.0); });
  EXPECT_NEAR(norm_l2eps(alt), 1.0, 1e-15);
}

TEST(Norms, Region) {
  const ChainGrid g(8);
  const PeriodicField one(g, std::vector<double>(16, 1.0));
  const std::vector<int> eight{0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_NEAR(norm_region(one, eight), std::sqrt(8.0 * g.epsilon()), 1e-15);
  std::vector<int> all;
  for (int l = g.first_site(); l <= g.last_site(); ++l) all.push_back(l);
  std::mt19937_64 rng(5);
  const auto v = random_field(g, rng, FieldKind::Generic);
  EXPECT_NEAR(norm_region(v, all), norm_l2eps(v), 1e-15);
  const std::vector<int> r{0, 1, 2, 3};
  double s = 0.0, m = 0.0;
  for (int l : r) {
    s += v.at(l) * v.at(l);
    m = std::max(m, std::abs(v.at(l)));
  }
  EXPECT_NEAR(norm_region(v, r), std::sqrt(g.epsilon() * s), 1e-15);
  EXPECT_EQ(norm_region(v, r, RegionNorm::Max), m);
  EXPECT_THROW(norm_region(v, std::vector<int>{}), std::invalid_argument);
}

TEST(StrainFourier, ZeroField) {
  for (const auto& c : strain_fourier(PeriodicField::zeros(ChainGrid(8), FieldKind::Displacement)))
    EXPECT_EQ(std::abs(c), 0.0);
}

TEST(StrainFourier, SingleMode) {
  const ChainGrid g(16);
  const auto strain = PeriodicField::from_sites(
      g, [&](int l) { return std::sin(g.epsilon() * l * std::numbers::pi); }, FieldKind::Strain);
  const auto u = displacement_from_strain(strain);
  const auto c = strain_fourier(u);
  for (int ki = 0; ki < g.size(); ++ki) {
    const int k = g.site(ki);
    if (std::abs(k) == 1) EXPECT_GT(std::abs(c[ki]), 0.1);
    else EXPECT_LE(std::abs(c[ki]), 1e-12);
  }
}

TEST(StrainFourier, ParsevalAndRoundTrip) {
  std::mt19937_64 rng(6);
  const ChainGrid g(8);
  const auto u = random_field(g, rng);
  const auto c = strain_fourier(u);
  double s = 0.0;
  for (const auto& x : c) s += std::norm(x);
  const double n = norm_l2eps(diff(u, 1));
  EXPECT_NEAR(s, n * n, 1e-12 * n * n);
  EXPECT_LE(std::abs(c[g.index(0)]), 1e-12);
  const auto back = inverse_strain_fourier(g, c);
  const auto du = diff(u, 1);
  for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(back[i], du[i], 1e-12 * std::max(1.0, std::abs(du[i])));
}

TEST(DisplacementFromStrain, InvertsDiff) {
  std::mt19937_64 rng(7);
  const auto u = random_field(ChainGrid(16), rng);
  const auto back = displacement_from_strain(diff(u, 1));
  for (int i = 0; i < u.size(); ++i) EXPECT_NEAR(back[i], u[i], 1e-13);
  EXPECT_THROW(displacement_from_strain(PeriodicField(ChainGrid(4), std::vector<double>(8, 1.0))),
               std::invalid_argument);
}

TEST(Identities, HoldOnRandomFields) {
  std::mt19937_64 rng(8);
  for (int N : {8, 16})
    for (int t = 0; t < 200; ++t) {
      const auto r = identity_residuals(random_field(ChainGrid(N), rng));
      for (double x : r) EXPECT_LE(x, 1e-12);
    }
}

TEST(Identities, FirstIdentityTermwise) {
  std::mt19937_64 rng(9);
  const ChainGrid g(8);
  const auto u = random_field(g, rng);
  const auto d1 = diff(u, 1), d2 = diff(u, 2);
  const double e = g.epsilon();
  for (int l = g.first_site(); l <= g.last_site(); ++l) {
    const double lhs = std::pow(d1.at(l) + d1.at(l + 1), 2);
    const double rhs = 2 * d1.at(l) * d1.at(l) + 2 * d1.at(l + 1) * d1.at(l + 1) - e * e * d2.at(l + 1) * d2.at(l + 1);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}
