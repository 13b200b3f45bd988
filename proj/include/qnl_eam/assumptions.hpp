#pragma once

#include <stdexcept>
#include <string>

#include "qnl_eam/coefficients.hpp"

namespace qnl_eam {

/// Sign hypotheses of the stability analysis at a single strain F.
///
/// a1: phi''(F) > 0, phi''(2F) < 0, rho'(F) <= 0, rho'(2F) <= 0,
///     rho''(F) >= 0, rho''(2F) >= 0, G''(rho_bar) >= 0.
/// a2: -B_F <= 0, i.e. the stability cubic is nondecreasing on [0, 4].
/// a3: phi''(2F) + G'' (rho'(F) + 2 rho'(2F))^2 + 2 G' rho''(2F) > 0, the regime in
///     which the local continuum model is more stable than the atomistic one.
struct AssumptionReport {
  double F = 0.0;
  UniformState state;  ///< raw values tested by a1
  double a2_value = 0.0;  ///< -B_F
  double a3_value = 0.0;
  bool a1_holds = false;
  bool a2_holds = false;
  bool a3_holds = false;
};

inline AssumptionReport check_assumptions(const EAMPotential& p, double F) {
  if (!(F > 0.0))
    throw std::invalid_argument("check_assumptions: F must be positive, got " + std::to_string(F));
  AssumptionReport rep;
  rep.F = F;
  rep.state = uniform_state(p, F);
  const UniformState& s = rep.state;
  const StabilityCoefficients c = coefficients(s);
  rep.a1_holds = s.phi2_F > 0.0 && s.phi2_2F < 0.0 && s.rho1_F <= 0.0 && s.rho1_2F <= 0.0 &&
                 s.rho2_F >= 0.0 && s.rho2_2F >= 0.0 && s.G2 >= 0.0;
  rep.a2_value = -c.B;
  rep.a2_holds = rep.a2_value <= 0.0;
  const double lin = s.rho1_F + 2.0 * s.rho1_2F;
  rep.a3_value = s.phi2_2F + s.G2 * lin * lin + 2.0 * s.G1 * s.rho2_2F;
  rep.a3_holds = rep.a3_value > 0.0;
  return rep;
}

}  // namespace qnl_eam
