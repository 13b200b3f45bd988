#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnl_eam/lattice.hpp"

namespace qnl_eam {

enum class SiteKind { Atomistic, QuasiNonlocal, Continuum };

/// Atomistic core |l| <= K, transition atoms +-(K+1), +-(K+2), continuum elsewhere.
class RegionDecomposition {
public:
  RegionDecomposition(int N, int K) : grid_(N), K_(K) {
    if (K < 0 || K >= N - 2)
      throw std::invalid_argument("RegionDecomposition: need 0 <= K < N - 2, got N=" +
                                  std::to_string(N) + ", K=" + std::to_string(K));
  }

  const ChainGrid& grid() const noexcept { return grid_; }
  int N() const noexcept { return grid_.N(); }
  int K() const noexcept { return K_; }

  /// Kind of the atom at site l, taken modulo the period.
  SiteKind kind(int site) const {
    const int l = grid_.site(grid_.index(site));
    const int a = std::abs(l);
    if (a <= K_) return SiteKind::Atomistic;
    if (a <= K_ + 2 && l != N()) return SiteKind::QuasiNonlocal;
    return SiteKind::Continuum;
  }

  /// {-(K+7)..-K} u {K..K+7}, the sites where the interface term of the
  /// consistency estimate is measured.
  std::vector<int> interface_sites() const {
    std::vector<int> s;
    for (int l = -(K_ + 7); l <= -K_; ++l) s.push_back(l);
    for (int l = K_; l <= K_ + 7; ++l)
      if (l != -K_) s.push_back(l);
    return s;
  }

  /// {-N+1..-(K+1)} u {K+1..N}.
  std::vector<int> continuum_sites() const {
    std::vector<int> s;
    for (int l = grid_.first_site(); l <= grid_.last_site(); ++l)
      if (std::abs(l) >= K_ + 1) s.push_back(l);
    return s;
  }

  friend bool operator==(const RegionDecomposition&, const RegionDecomposition&) = default;

private:
  ChainGrid grid_;
  int K_;
};

}  // namespace qnl_eam
