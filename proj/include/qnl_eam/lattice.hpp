#pragma once

// Periodic chain geometry: one period holds the sites l = -N+1 .. N, stored at
// index l + N - 1. Every site argument wraps modulo 2N.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnl_eam {

class ChainGrid {
public:
  explicit ChainGrid(int N) : N_(N) {
    if (N < 4) throw std::invalid_argument("ChainGrid: N must be >= 4, got " + std::to_string(N));
  }

  int N() const noexcept { return N_; }
  int size() const noexcept { return 2 * N_; }
  double epsilon() const noexcept { return 1.0 / N_; }

  int first_site() const noexcept { return -N_ + 1; }
  int last_site() const noexcept { return N_; }

  /// Storage index of site l, after periodic wraparound.
  int index(int site) const noexcept {
    const int n = size();
    int i = (site + N_ - 1) % n;
    return i < 0 ? i + n : i;
  }

  int site(int index) const noexcept { return index - N_ + 1; }

  friend bool operator==(const ChainGrid&, const ChainGrid&) = default;

private:
  int N_;
};

enum class FieldKind { Displacement, Strain, Residual, Generic };

/// A 2N-periodic real sequence over one period. Displacements are projected to
/// zero mean on construction.
class PeriodicField {
public:
  PeriodicField(ChainGrid grid, std::vector<double> values, FieldKind kind = FieldKind::Generic)
      : grid_(grid), values_(std::move(values)), kind_(kind) {
    if (static_cast<int>(values_.size()) != grid_.size())
      throw std::invalid_argument("PeriodicField: expected " + std::to_string(grid_.size()) +
                                  " values, got " + std::to_string(values_.size()));
    if (kind_ == FieldKind::Displacement) remove_mean();
  }

  static PeriodicField zeros(ChainGrid grid, FieldKind kind = FieldKind::Generic) {
    return PeriodicField(grid, std::vector<double>(grid.size(), 0.0), kind);
  }

  /// Samples `f(site)` on one period.
  template <class Fn>
  static PeriodicField from_sites(ChainGrid grid, Fn&& f, FieldKind kind = FieldKind::Generic) {
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.size(); ++i) v[i] = f(grid.site(i));
    return PeriodicField(grid, std::move(v), kind);
  }

  const ChainGrid& grid() const noexcept { return grid_; }
  FieldKind kind() const noexcept { return kind_; }
  int size() const noexcept { return grid_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](int index) const { return values_[index]; }
  /// Value at site l (periodic).
  double at(int site) const { return values_[grid_.index(site)]; }

  double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }
  double mean() const { return sum() / size(); }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  PeriodicField with_kind(FieldKind kind) const { return PeriodicField(grid_, values_, kind); }

  friend PeriodicField operator+(const PeriodicField& a, const PeriodicField& b) {
    check_same_grid(a, b);
    std::vector<double> v(a.values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values_[i];
    return PeriodicField(a.grid_, std::move(v), a.kind_ == b.kind_ ? a.kind_ : FieldKind::Generic);
  }

  friend PeriodicField operator-(const PeriodicField& a, const PeriodicField& b) {
    check_same_grid(a, b);
    std::vector<double> v(a.values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values_[i];
    return PeriodicField(a.grid_, std::move(v), a.kind_ == b.kind_ ? a.kind_ : FieldKind::Generic);
  }

  friend PeriodicField operator*(double s, const PeriodicField& a) {
    std::vector<double> v(a.values_);
    for (double& x : v) x *= s;
    return PeriodicField(a.grid_, std::move(v), a.kind_);
  }

private:
  static void check_same_grid(const PeriodicField& a, const PeriodicField& b) {
    if (!(a.grid_ == b.grid_)) throw std::invalid_argument("PeriodicField: grid mismatch");
  }

  void remove_mean() {
    const double m = mean();
    for (double& v : values_) v -= m;
  }

  ChainGrid grid_;
  std::vector<double> values_;
  FieldKind kind_;
};

inline PeriodicField project_zero_mean(const PeriodicField& u) {
  const double m = u.mean();
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x -= m;
  return PeriodicField(u.grid(), std::move(v), u.kind());
}

/// (D^order u)_l, the scaled backward difference applied `order` times.
inline PeriodicField diff(const PeriodicField& u, int order = 1) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("diff: order must be in 1..4, got " + std::to_string(order));
  const ChainGrid& g = u.grid();
  const int n = g.size();
  const double inv_eps = static_cast<double>(g.N());
  std::vector<double> cur(u.values().begin(), u.values().end());
  std::vector<double> next(n);
  for (int k = 0; k < order; ++k) {
    for (int i = 0; i < n; ++i) next[i] = (cur[i] - cur[i == 0 ? n - 1 : i - 1]) * inv_eps;
    std::swap(cur, next);
  }
  const FieldKind kind =
      (order == 1 && u.kind() == FieldKind::Displacement) ? FieldKind::Strain : FieldKind::Generic;
  return PeriodicField(g, std::move(cur), kind);
}

/// Inverse of `diff(., 1)` on zero-sum strains: the zero-mean displacement u
/// with Du = strain.
inline PeriodicField displacement_from_strain(const PeriodicField& strain) {
  const ChainGrid& g = strain.grid();
  const double scale = std::max(1.0, strain.max_abs());
  if (std::abs(strain.sum()) > 1e-10 * scale * g.size())
    throw std::invalid_argument("displacement_from_strain: strain must sum to zero over a period");
  std::vector<double> u(g.size());
  double acc = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    acc += g.epsilon() * strain[i];
    u[i] = acc;
  }
  return PeriodicField(g, std::move(u), FieldKind::Displacement);
}

/// (eps * sum_l v_l^2)^(1/2) over one period.
inline double norm_l2eps(const PeriodicField& v) {
  double s = 0.0;
  for (double x : v.values()) s += x * x;
  return std::sqrt(v.grid().epsilon() * s);
}

enum class RegionNorm { L2eps, Max };

/// Restricted norm over a set of sites: l2_eps over the region, or the max of |v_l|.
inline double norm_region(const PeriodicField& v, std::span<const int> sites,
                          RegionNorm mode = RegionNorm::L2eps) {
  if (sites.empty()) throw std::invalid_argument("norm_region: empty region");
  if (mode == RegionNorm::Max) {
    double m = 0.0;
    for (int l : sites) m = std::max(m, std::abs(v.at(l)));
    return m;
  }
  double s = 0.0;
  for (int l : sites) s += v.at(l) * v.at(l);
  return std::sqrt(v.grid().epsilon() * s);
}

/// Coefficients c_k, k = -N+1 .. N (stored at k + N - 1), with
/// Du_l = sum_k c_k / sqrt(2) exp(i k l pi / N). Direct O(N^2) transform.
inline std::vector<std::complex<double>> strain_fourier(const PeriodicField& u) {
  const PeriodicField du = diff(u, 1);
  const ChainGrid& g = u.grid();
  const int n = g.size();
  const double norm = std::numbers::sqrt2 / n;
  std::vector<std::complex<double>> c(n);
  for (int ki = 0; ki < n; ++ki) {
    const int k = g.site(ki);
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const int l = g.site(i);
      // reduce k*l mod 2N before the angle so large N keeps full accuracy
      const long long kl = (static_cast<long long>(k) * l) % n;
      const double angle = -std::numbers::pi * static_cast<double>(kl) / g.N();
      acc += du[i] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    c[ki] = norm * acc;
  }
  return c;
}

/// Strain field synthesized from coefficients laid out as in `strain_fourier`.
/// The imaginary part is dropped; conjugate-symmetric input gives a real field.
inline PeriodicField inverse_strain_fourier(ChainGrid grid,
                                            std::span<const std::complex<double>> c) {
  const int n = grid.size();
  if (static_cast<int>(c.size()) != n)
    throw std::invalid_argument("inverse_strain_fourier: coefficient count mismatch");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const int l = grid.site(i);
    std::complex<double> acc{0.0, 0.0};
    for (int ki = 0; ki < n; ++ki) {
      const long long kl = (static_cast<long long>(grid.site(ki)) * l) % n;
      const double angle = std::numbers::pi * static_cast<double>(kl) / grid.N();
      acc += c[ki] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    v[i] = acc.real() / std::numbers::sqrt2;
  }
  return PeriodicField(grid, std::move(v), FieldKind::Strain);
}

/// s_k = 4 sin^2(k pi / 2N).
inline double fourier_symbol(int k, int N) {
  const double s = std::sin(k * std::numbers::pi / (2.0 * N));
  return 4.0 * s * s;
}

}  // namespace qnl_eam
