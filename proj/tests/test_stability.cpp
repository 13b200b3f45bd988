#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qnl_eam/builtin_potentials.hpp"
#include "qnl_eam/checks.hpp"
#include "qnl_eam/stability.hpp"

using namespace qnl_eam;

namespace {

struct Oracle {
  const char* potential;
  double F, A, B, C, D;
};

// independent symbolic evaluation of the four coefficients
constexpr Oracle kOracle[] = {
    {"default", 1.00, 2.415452488601989e+01, 6.664335222888560e-01, 1.074637387342833e-02, -2.230876959020069e-04},
    {"default", 1.05, 1.036385035955900e+01, 4.670713128518901e-01, 6.693679535092653e-03, -1.224331233802729e-04},
    {"remark44", 1.00, 1.178603079896983e+00, -1.243161662715784e+00, 2.471665990885511e-01, -5.131017005699334e-03},
    {"remark44", 1.05, -1.130478045317932e+01, -7.622180976513937e-01, 1.539546293069921e-01, -2.815961837723865e-03},
};

constexpr double kCriticalDefault = 1.119339924460;

void expect_rel(double got, double want, double tol) {
  EXPECT_LE(std::abs(got - want), tol * std::abs(want)) << got << " vs " << want;
}

}  // namespace

TEST(Coefficients, MatchOracle) {
  for (const Oracle& o : kOracle) {
    const auto c = coefficients(*builtin::by_name(o.potential), o.F);
    expect_rel(c.A, o.A, 1e-9);
    expect_rel(c.B, o.B, 1e-9);
    expect_rel(c.C, o.C, 1e-9);
    expect_rel(c.D, o.D, 1e-9);
    EXPECT_DOUBLE_EQ(c.A, c.A_hat + c.A_tilde);
  }
}

TEST(Coefficients, PairOnly) {
  const auto p = builtin::pair_potential();
  for (double F : {0.95, 1.0, 1.1}) {
    const auto c = coefficients(p, F);
    EXPECT_NEAR(c.A, p.pair.d2(F) + 4 * p.pair.d2(2 * F), 1e-12);
    EXPECT_NEAR(c.B, -p.pair.d2(2 * F), 1e-12);
    EXPECT_EQ(c.C, 0.0);
    EXPECT_EQ(c.D, 0.0);
    EXPECT_NEAR(lambda_cubic(c, 4.0), p.pair.d2(F), 1e-12);
  }
}

TEST(Coefficients, CubicIncreasingWhenBNonnegative) {
  const auto p = builtin::default_potential();
  for (double F : {0.95, 1.0, 1.05, 1.1, 1.15}) {
    const auto c = coefficients(p, F);
    ASSERT_GE(c.B, 0.0);
    for (int i = 1; i <= 400; ++i)
      EXPECT_GE(lambda_cubic(c, 4.0 * i / 400), lambda_cubic(c, 4.0 * (i - 1) / 400)) << "F=" << F;
  }
}

TEST(Fourier, SymbolValues) {
  EXPECT_EQ(fourier_symbol(0, 8), 0.0);
  EXPECT_NEAR(fourier_symbol(8, 8), 4.0, 1e-14);
  EXPECT_NEAR(fourier_symbol(4, 8), 2.0, 1e-14);
  EXPECT_NEAR(fourier_symbol(-3, 8), fourier_symbol(3, 8), 0.0);
}

TEST(Fourier, DefaultMinimizerIsK1) {
  const auto rep = fourier_spectrum(builtin::default_potential(), 1.0, 64);
  EXPECT_TRUE(rep.minimizer_is_k1);
  EXPECT_EQ(rep.modes.size(), 128u);
}

TEST(Fourier, MinimizerMovesWhenB_IsNegative) {
  const auto rep = fourier_spectrum(builtin::remark44_potential(), 1.0, 256);
  EXPECT_FALSE(rep.minimizer_is_k1);
  EXPECT_GT(rep.argmin_k, 1);
}

TEST(Spectrum, StrainRouteMatchesFourier) {
  for (const char* name : {"default", "remark44", "pair"})
    for (int N : {8, 16, 32}) {
      const auto p = *builtin::by_name(name);
      auto ev = stability_spectrum(ModelKind::Atomistic, nullptr, p, 1.0, N);
      const auto rep = fourier_spectrum(p, 1.0, N);
      std::vector<double> ref;
      for (const auto& m : rep.modes)
        if (m.k != 0) ref.push_back(m.lambda);
      std::sort(ref.begin(), ref.end());
      ASSERT_EQ(ev.size(), ref.size());
      const double scale = std::max(std::abs(ref.front()), std::abs(ref.back()));
      for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev[i], ref[i], 1e-12 * scale) << name << " N=" << N;
    }
}

TEST(Spectrum, DenseGeneralizedMatchesFourier) {
  const auto p = builtin::default_potential();
  for (int N : {8, 16}) {
    const auto ev = dense_generalized_spectrum(hessian(ModelKind::Atomistic, nullptr, p, ChainGrid(N), 1.0));
    const auto rep = fourier_spectrum(p, 1.0, N);
    std::vector<double> ref;
    for (const auto& m : rep.modes)
      if (m.k != 0) ref.push_back(m.lambda);
    std::sort(ref.begin(), ref.end());
    ASSERT_EQ(ev.size(), ref.size());
    for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev[i], ref[i], 1e-9 * std::abs(ref[i]));
  }
}

TEST(Spectrum, QuadraticFormDecomposition) {
  std::mt19937_64 rng(21);
  const auto p = builtin::default_potential();
  const ChainGrid g(16);
  const double F = 1.0, e = g.epsilon();
  const auto c = coefficients(p, F);
  const auto H = hessian(ModelKind::Atomistic, nullptr, p, g, F);
  for (int t = 0; t < 100; ++t) {
    const auto u = random_displacement(g, 1.0, rng);
    auto n2 = [&](int k) { return std::pow(norm_l2eps(diff(u, k)), 2); };
    const double rhs = c.A * n2(1) + e * e * c.B * n2(2) + std::pow(e, 4) * c.C * n2(3) + std::pow(e, 6) * c.D * n2(4);
    EXPECT_NEAR(H.form(u, u), rhs, 1e-11 * std::abs(rhs));
  }
}

TEST(Spectrum, LowerBoundIsSharp) {
  std::mt19937_64 rng(22);
  const auto p = builtin::default_potential();
  const int N = 16;
  const ChainGrid g(N);
  const auto H = hessian(ModelKind::Atomistic, nullptr, p, g, 1.0);
  const auto me = min_eig_numeric(ModelKind::Atomistic, nullptr, p, 1.0, N);
  EXPECT_NEAR(me.lambda_min, fourier_spectrum(p, 1.0, N).lambda_min, 1e-10 * me.lambda_min);
  for (int t = 0; t < 100; ++t)
    EXPECT_GE(rayleigh_quotient(H, random_displacement(g, 1.0, rng)), me.lambda_min * (1 - 1e-12));
  EXPECT_NEAR(norm_l2eps(diff(me.mode, 1)), 1.0, 1e-12);
  EXPECT_NEAR(rayleigh_quotient(H, me.mode), me.lambda_min, 1e-10 * me.lambda_min);
}

TEST(Spectrum, QNLAndQCLMinimaEqualContinuumModulus) {
  const auto p = builtin::default_potential();
  for (int N : {32, 64})
    for (int K : {4, 8}) {
      const RegionDecomposition region(N, K);
      const double A = coefficients(p, 1.0).A;
      EXPECT_NEAR(stability_spectrum(ModelKind::QNL, &region, p, 1.0, N).front(), A, 1e-10 * A);
    }
  const double A = coefficients(p, 1.05).A;
  EXPECT_NEAR(stability_spectrum(ModelKind::QCL, nullptr, p, 1.05, 32).front(), A, 1e-10 * A);
}

TEST(Spectrum, EmbeddingCurvatureOnlyIsPositiveForQNL) {
  // phi = 0 and G'(rho_bar) = 0 leave G'' |delta rho|^2 >= 0
  std::mt19937_64 rng(23);
  const double F = 1.0, c0 = 0.7;
  const ScalarFunctionC2 rho{[](double r) { return 0.5 * (r - 5.0 / 3.0) * (r - 5.0 / 3.0); },
                             [](double r) { return r - 5.0 / 3.0; }, [](double) { return 1.0; }};
  const double rho_bar = 2 * rho(F) + 2 * rho(2 * F);
  const ScalarFunctionC2 G{[=](double s) { return 0.5 * c0 * (s - rho_bar) * (s - rho_bar); },
                           [=](double s) { return c0 * (s - rho_bar); }, [=](double) { return c0; }};
  const EAMPotential p{"curvature-only", functions::zero(), rho, G, {}};
  for (int N : {16, 32}) {
    const ChainGrid g(N);
    const RegionDecomposition region(N, 4);
    const auto H = hessian(ModelKind::QNL, &region, p, g, F);
    for (int t = 0; t < 50; ++t) {
      const auto u = random_displacement(g, 1.0, rng);
      EXPECT_GE(H.form(u, u), -1e-12);
    }
  }
}

TEST(Stability, CriticalStrainOfQCLIsRootOfA) {
  const auto p = builtin::default_potential();
  const double Fq = critical_strain(ModelKind::QCL, nullptr, p, 32, 1.0, 1.15);
  EXPECT_NEAR(Fq, kCriticalDefault, 1e-9 * kCriticalDefault);
  EXPECT_TRUE(is_stable(ModelKind::QCL, nullptr, p, 1.1, 32));
  EXPECT_FALSE(is_stable(ModelKind::QCL, nullptr, p, 1.13, 32));
}

TEST(Stability, CriticalStrainOrdering) {
  const auto p = builtin::default_potential();
  const int N = 32;
  const RegionDecomposition region(N, 4);
  const double fa = critical_strain(ModelKind::Atomistic, nullptr, p, N, 1.0, 1.15);
  const double fq = critical_strain(ModelKind::QNL, &region, p, N, 1.0, 1.15);
  // QNL loses stability with the continuum modulus, the atomistic chain later
  EXPECT_GT(fa, kCriticalDefault);
  EXPECT_NEAR(fq, kCriticalDefault, 1e-9 * kCriticalDefault);
  EXPECT_LT(fa - fq, 1e-2);
}

TEST(Stability, BracketError) {
  const auto p = builtin::default_potential();
  EXPECT_THROW(critical_strain(ModelKind::Atomistic, nullptr, p, 16, 0.95, 1.0), BracketError);
  EXPECT_THROW(critical_strain(ModelKind::Atomistic, nullptr, p, 16, 1.2, 1.3), BracketError);
}

TEST(RemarkFunctions, NormsAndQuotient) {
  const auto p = builtin::remark44_potential();
  const int N = 64, K = 8;
  const auto [ut, uh] = remark_test_functions(N, K);
  const double e = 1.0 / N;
  EXPECT_NEAR(std::pow(norm_l2eps(diff(ut, 1)), 2), 1.0, 1e-13);
  EXPECT_NEAR(std::pow(norm_l2eps(diff(uh, 1)), 2), e * (K - 1) + e / 4, 1e-13);
  EXPECT_LE(std::abs(uh.mean()), 1e-15);
  const auto s = uniform_state(p, 1.0);
  const double target = s.phi2_F + 2 * s.G1 * s.rho2_F;
  const double rq = rayleigh_quotient(hessian(ModelKind::Atomistic, nullptr, p, ChainGrid(N), 1.0), ut);
  EXPECT_NEAR(rq, target, 1e-10 * std::abs(target));
  EXPECT_LT(rq, stability_spectrum(ModelKind::QCL, nullptr, p, 1.0, N).front());
  EXPECT_THROW(remark_test_functions(16, 1), std::invalid_argument);
  EXPECT_THROW(remark_test_functions(16, 14), std::invalid_argument);
}
