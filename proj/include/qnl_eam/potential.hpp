#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qnl_eam {

/// A real function with its first two derivatives.
struct ScalarFunctionC2 {
  std::function<double(double)> eval;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  double operator()(double r) const { return eval(r); }
};

namespace functions {

inline ScalarFunctionC2 zero() {
  auto z = [](double) { return 0.0; };
  return {z, z, z};
}

/// phi(r) = exp(-2 alpha (r - 1)) - 2 exp(-alpha (r - 1)); minimum -1 at r = 1.
inline ScalarFunctionC2 morse(double alpha) {
  return {
      [alpha](double r) {
        const double e = std::exp(-alpha * (r - 1.0));
        return e * e - 2.0 * e;
      },
      [alpha](double r) {
        const double e = std::exp(-alpha * (r - 1.0));
        return -2.0 * alpha * e * e + 2.0 * alpha * e;
      },
      [alpha](double r) {
        const double e = std::exp(-alpha * (r - 1.0));
        return 4.0 * alpha * alpha * e * e - 2.0 * alpha * alpha * e;
      },
  };
}

/// rho(r) = exp(-beta (r - 1)).
inline ScalarFunctionC2 exponential(double beta) {
  return {
      [beta](double r) { return std::exp(-beta * (r - 1.0)); },
      [beta](double r) { return -beta * std::exp(-beta * (r - 1.0)); },
      [beta](double r) { return beta * beta * std::exp(-beta * (r - 1.0)); },
  };
}

/// G(s) = c0/2 s^2 - c1 s.
inline ScalarFunctionC2 quadratic(double c0, double c1) {
  return {
      [c0, c1](double s) { return 0.5 * c0 * s * s - c1 * s; },
      [c0, c1](double s) { return c0 * s - c1; },
      [c0](double) { return c0; },
  };
}

}  // namespace functions

enum class PairFamily { None, Morse };
enum class DensityFamily { None, Exponential };
enum class EmbeddingFamily { None, Quadratic };

/// Parameters of the parseable potential families.
struct PotentialParameters {
  std::string name = "unnamed";
  PairFamily pair = PairFamily::Morse;
  DensityFamily density = DensityFamily::Exponential;
  EmbeddingFamily embedding = EmbeddingFamily::Quadratic;
  double alpha = 4.0;
  double beta = 3.0;
  double c0 = 0.0;
  double c1 = 0.0;
};

/// EAM potential: pair term phi, electron density rho, embedding function G.
struct EAMPotential {
  std::string name;
  ScalarFunctionC2 pair;
  ScalarFunctionC2 density;
  ScalarFunctionC2 embedding;
  /// Strain interval on which the sign hypotheses are asserted to hold, when known.
  std::optional<std::pair<double, double>> stable_range;
};

inline EAMPotential make_potential(const PotentialParameters& p) {
  EAMPotential out;
  out.name = p.name;
  out.pair = p.pair == PairFamily::Morse ? functions::morse(p.alpha) : functions::zero();
  out.density =
      p.density == DensityFamily::Exponential ? functions::exponential(p.beta) : functions::zero();
  out.embedding = p.embedding == EmbeddingFamily::Quadratic ? functions::quadratic(p.c0, p.c1)
                                                            : functions::zero();
  return out;
}

struct DerivativeReport {
  double max_deviation_d1 = 0.0;  ///< analytic d1 vs central difference of eval
  double max_deviation_d2 = 0.0;  ///< analytic d2 vs central difference of d1
  std::string worst;              ///< "pair.d1", "embedding.d2", ...
  bool passed = true;

  double max_deviation() const { return std::max(max_deviation_d1, max_deviation_d2); }
};

/// Checks one function on the probe points with central differences at step h.
/// Deviations are relative to max(|difference quotient|, 1).
inline DerivativeReport validate_derivatives(const ScalarFunctionC2& f,
                                             std::span<const double> probe,
                                             double tolerance = 1e-6, double h = 1e-5) {
  DerivativeReport rep;
  for (double r : probe) {
    const double fd1 = (f.eval(r + h) - f.eval(r - h)) / (2.0 * h);
    const double fd2 = (f.d1(r + h) - f.d1(r - h)) / (2.0 * h);
    const double dev1 = std::abs(fd1 - f.d1(r)) / std::max(std::abs(fd1), 1.0);
    const double dev2 = std::abs(fd2 - f.d2(r)) / std::max(std::abs(fd2), 1.0);
    rep.max_deviation_d1 = std::max(rep.max_deviation_d1, dev1);
    rep.max_deviation_d2 = std::max(rep.max_deviation_d2, dev2);
  }
  rep.worst = rep.max_deviation_d1 >= rep.max_deviation_d2 ? "d1" : "d2";
  rep.passed = rep.max_deviation() <= tolerance;
  return rep;
}

/// Checks pair, density and embedding. The embedding is probed at densities
/// 2 rho(r) + 2 rho(2r), the uniform-strain arguments it is evaluated at.
inline DerivativeReport validate_derivatives(const EAMPotential& p, std::span<const double> probe,
                                             double tolerance = 1e-6) {
  std::vector<double> densities;
  densities.reserve(probe.size());
  for (double r : probe) densities.push_back(2.0 * p.density(r) + 2.0 * p.density(2.0 * r));

  DerivativeReport total;
  const std::pair<const char*, DerivativeReport> parts[] = {
      {"pair", validate_derivatives(p.pair, probe, tolerance)},
      {"density", validate_derivatives(p.density, probe, tolerance)},
      {"embedding", validate_derivatives(p.embedding, densities, tolerance)},
  };
  double worst = -1.0;
  for (const auto& [label, rep] : parts) {
    total.max_deviation_d1 = std::max(total.max_deviation_d1, rep.max_deviation_d1);
    total.max_deviation_d2 = std::max(total.max_deviation_d2, rep.max_deviation_d2);
    if (rep.max_deviation() > worst) {
      worst = rep.max_deviation();
      total.worst = std::string(label) + "." + rep.worst;
    }
  }
  total.passed = total.max_deviation() <= tolerance;
  return total;
}

}  // namespace qnl_eam
