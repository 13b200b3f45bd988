#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qnl_eam/lattice.hpp"

namespace qnl_eam {

/// Symmetric periodic operator stored as a stencil: band(i, d) couples index i
/// with index i + d (mod n), d = 0..half_bandwidth. When n is small enough that
/// offsets d and n - d coincide, both stencil entries contribute to the same
/// matrix element.
class SymmetricBandedOperator {
public:
  SymmetricBandedOperator(ChainGrid grid, int half_bandwidth = 4)
      : grid_(grid), hb_(half_bandwidth),
        bands_(static_cast<std::size_t>(grid.size()) * (half_bandwidth + 1), 0.0) {
    if (half_bandwidth < 0 || 2 * half_bandwidth > grid.size())
      throw std::invalid_argument("SymmetricBandedOperator: bandwidth too large for the period");
  }

  const ChainGrid& grid() const noexcept { return grid_; }
  int half_bandwidth() const noexcept { return hb_; }
  int size() const noexcept { return grid_.size(); }

  double band(int i, int d) const { return bands_[static_cast<std::size_t>(i) * (hb_ + 1) + d]; }
  double& band(int i, int d) { return bands_[static_cast<std::size_t>(i) * (hb_ + 1) + d]; }

  /// Matrix element (i, j), storage indices.
  double coefficient(int i, int j) const {
    const int n = size();
    const int d = ((j - i) % n + n) % n;
    double c = 0.0;
    if (d <= hb_) c += band(i, d);
    if (d != 0 && n - d <= hb_) c += band(j, n - d);
    return c;
  }

  /// y = A x, accumulated in the precision of the input.
  template <class Real>
  std::vector<Real> apply(std::span<const Real> x) const {
    const int n = size();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("apply: size mismatch");
    std::vector<Real> y(n, Real(0));
    for (int i = 0; i < n; ++i) {
      Real acc = band(i, 0) * x[i];
      for (int d = 1; d <= hb_; ++d) {
        const int ip = (i + d) % n;
        const int im = (i - d + n) % n;
        acc += Real(band(i, d)) * x[ip] + Real(band(im, d)) * x[im];
      }
      y[i] = acc;
    }
    return y;
  }

  PeriodicField apply(const PeriodicField& u) const {
    if (!(u.grid() == grid_)) throw std::invalid_argument("apply: grid mismatch");
    return PeriodicField(grid_, apply<double>(u.values()), FieldKind::Residual);
  }

  /// <H u, w> with the plain (unweighted) pairing.
  double form(const PeriodicField& u, const PeriodicField& w) const {
    const auto hu = apply<double>(u.values());
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += hu[i] * w[i];
    return s;
  }

  Eigen::MatrixXd dense() const {
    const int n = size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) += band(i, 0);
      for (int d = 1; d <= hb_; ++d) {
        const int j = (i + d) % n;
        m(i, j) += band(i, d);
        m(j, i) += band(i, d);
      }
    }
    return m;
  }

  friend SymmetricBandedOperator operator-(const SymmetricBandedOperator& a,
                                           const SymmetricBandedOperator& b) {
    if (!(a.grid_ == b.grid_) || a.hb_ != b.hb_)
      throw std::invalid_argument("SymmetricBandedOperator: shape mismatch");
    SymmetricBandedOperator r = a;
    for (std::size_t k = 0; k < r.bands_.size(); ++k) r.bands_[k] -= b.bands_[k];
    return r;
  }

private:
  ChainGrid grid_;
  int hb_;
  std::vector<double> bands_;
};

/// The operator of the strain metric: <L u, u> = ||Du||^2_{l2_eps}.
inline SymmetricBandedOperator strain_metric(ChainGrid grid) {
  SymmetricBandedOperator L(grid, 1);
  const double inv_eps = grid.N();
  for (int i = 0; i < grid.size(); ++i) {
    L.band(i, 0) = 2.0 * inv_eps;
    L.band(i, 1) = -inv_eps;
  }
  return L;
}

}  // namespace qnl_eam
