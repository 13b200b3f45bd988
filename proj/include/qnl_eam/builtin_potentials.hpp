#pragma once

// Shipped toy potentials. Embedding parameters come from
// tools/scan_potentials.py; rerun it before changing any constant here.

#include <optional>
#include <string>

#include "qnl_eam/potential.hpp"

namespace qnl_eam::builtin {

/// Hypotheses a1 hold on this strain interval for every shipped potential;
/// phi''(F) > 0 fails past F = 1 + ln(2)/4 ~ 1.173 for the Morse pair term.
inline constexpr double kStableLo = 0.95;
inline constexpr double kStableHi = 1.15;

/// Smallest scanned (c0, c1) with a1 and a2 on [0.95, 1.15] and the critical
/// strain (A_F = 0, near F = 1.1193) inside that interval.
inline PotentialParameters default_parameters() {
  return {"default", PairFamily::Morse, DensityFamily::Exponential, EmbeddingFamily::Quadratic,
          4.0, 3.0, 0.01, 0.3};
}

/// a1 and a3 at F = 1 (a2 fails), A_F >= 1 and phi'' + 2 G' rho'' < 0: the
/// oscillatory mode is unstable atomistically while the local continuum is stable.
inline PotentialParameters remark44_parameters() {
  return {"remark44", PairFamily::Morse, DensityFamily::Exponential, EmbeddingFamily::Quadratic,
          4.0, 3.0, 0.23, 2.27};
}

/// G = 0: the Morse pair potential alone.
inline PotentialParameters pair_parameters() {
  return {"pair", PairFamily::Morse, DensityFamily::None, EmbeddingFamily::None, 4.0, 3.0, 0.0, 0.0};
}

inline EAMPotential with_range(EAMPotential p) {
  p.stable_range = std::pair{kStableLo, kStableHi};
  return p;
}

inline EAMPotential default_potential() { return with_range(make_potential(default_parameters())); }
inline EAMPotential remark44_potential() { return with_range(make_potential(remark44_parameters())); }
inline EAMPotential pair_potential() { return with_range(make_potential(pair_parameters())); }

inline std::optional<EAMPotential> by_name(const std::string& name) {
  if (name == "default") return default_potential();
  if (name == "remark44") return remark44_potential();
  if (name == "pair") return pair_potential();
  return std::nullopt;
}

}  // namespace qnl_eam::builtin
