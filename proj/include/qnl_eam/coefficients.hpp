#pragma once

#include <stdexcept>
#include <string>

#include "qnl_eam/potential.hpp"

namespace qnl_eam {

/// Derivatives of phi, rho and G at the uniform strain F. G is evaluated at the
/// uniform density rho_bar = 2 rho(F) + 2 rho(2F), which is the same for the
/// atomistic, continuum and quasi-nonlocal densities.
struct UniformState {
  double F = 0.0;
  double rho_bar = 0.0;
  double phi2_F = 0.0, phi2_2F = 0.0;
  double rho1_F = 0.0, rho1_2F = 0.0;
  double rho2_F = 0.0, rho2_2F = 0.0;
  double G1 = 0.0, G2 = 0.0;
};

inline UniformState uniform_state(const EAMPotential& p, double F) {
  if (!(F > 0.0)) throw std::invalid_argument("uniform_state: F must be positive, got " + std::to_string(F));
  UniformState s;
  s.F = F;
  s.rho_bar = 2.0 * p.density(F) + 2.0 * p.density(2.0 * F);
  s.phi2_F = p.pair.d2(F);
  s.phi2_2F = p.pair.d2(2.0 * F);
  s.rho1_F = p.density.d1(F);
  s.rho1_2F = p.density.d1(2.0 * F);
  s.rho2_F = p.density.d2(F);
  s.rho2_2F = p.density.d2(2.0 * F);
  s.G1 = p.embedding.d1(s.rho_bar);
  s.G2 = p.embedding.d2(s.rho_bar);
  return s;
}

/// Coefficients of the atomistic second variation at y_F,
///   <H u, u> = A |Du|^2 + eps^2 B |D2 u|^2 + eps^4 C |D3 u|^2 + eps^6 D |D4 u|^2.
struct StabilityCoefficients {
  double F = 0.0;
  double A_hat = 0.0;    ///< embedding part of the continuum modulus
  double A_tilde = 0.0;  ///< pair part of the continuum modulus
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};

inline StabilityCoefficients coefficients(const UniformState& s) {
  StabilityCoefficients c;
  c.F = s.F;
  const double r1 = s.rho1_F, r2 = s.rho1_2F;
  const double lin = r1 + 2.0 * r2;
  c.A_hat = 4.0 * s.G2 * lin * lin + 2.0 * s.G1 * (s.rho2_F + 4.0 * s.rho2_2F);
  c.A_tilde = s.phi2_F + 4.0 * s.phi2_2F;
  c.A = c.A_hat + c.A_tilde;
  c.B = -(s.phi2_2F + s.G2 * (r1 * r1 + 20.0 * r2 * r2 + 12.0 * r1 * r2) + 2.0 * s.G1 * s.rho2_2F);
  c.C = s.G2 * (8.0 * r2 * r2 + 2.0 * r1 * r2);
  c.D = -s.G2 * r2 * r2;
  return c;
}

inline StabilityCoefficients coefficients(const EAMPotential& p, double F) {
  return coefficients(uniform_state(p, F));
}

/// lambda_F(s) = A + B s + C s^2 + D s^3; physical modes have s in [0, 4].
inline double lambda_cubic(const StabilityCoefficients& c, double s) {
  return c.A + s * (c.B + s * (c.C + s * c.D));
}

inline double lambda_cubic_derivative(const StabilityCoefficients& c, double s) {
  return c.B + s * (2.0 * c.C + 3.0 * s * c.D);
}

}  // namespace qnl_eam
