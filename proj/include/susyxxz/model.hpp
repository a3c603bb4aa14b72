/**
 * @file model.hpp
 * @brief Sector-restricted matrices of the open XXZ chain
 *
 *   H = sum_i [ J (S+_i S-_{i+1} + h.c.) + Delta Sz_i Sz_{i+1} ]
 *       - h (Sz_1 + Sz_L) + (3L - 1)/4
 *
 * which is supersymmetric at (J, Delta, h) = (-1, 1, 1/2).
 *
 * For L = 1 the edge term is read literally with site 1 = site L, giving
 * -2h Sz_1. That convention makes |down> (L=1) and |up up> (L=2) degenerate,
 * which the N = 3 pairing requires.
 */
#pragma once

#include <algorithm>
#include <cassert>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "susyxxz/basis.hpp"

namespace susyxxz {

struct ModelParams {
  double J = -1.0;
  double Delta = 1.0;
  double h = 0.5;

  [[nodiscard]] static constexpr ModelParams susy_point() noexcept { return {-1.0, 1.0, 0.5}; }

  /// Exact comparison; callers pass literal values.
  [[nodiscard]] constexpr bool is_susy_point() const noexcept {
    return J == -1.0 && Delta == 1.0 && h == 0.5;
  }

  friend constexpr bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Coupling varied in slopes and sweeps.
enum class Coupling { kDelta, kJ };

[[nodiscard]] constexpr double susy_value(Coupling c) noexcept {
  return c == Coupling::kDelta ? 1.0 : -1.0;
}

[[nodiscard]] constexpr double coupling_value(const ModelParams& p, Coupling c) noexcept {
  return c == Coupling::kDelta ? p.Delta : p.J;
}

[[nodiscard]] constexpr ModelParams with_coupling(ModelParams p, Coupling c, double value) noexcept {
  (c == Coupling::kDelta ? p.Delta : p.J) = value;
  return p;
}

[[nodiscard]] inline std::string to_string(Coupling c) {
  return c == Coupling::kDelta ? "delta" : "j";
}

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SectorMatrix {
  SectorKey key;
  ModelParams params;
  Matrix entries;
};

namespace detail {

inline std::size_t config_index(const std::vector<SpinConfig>& basis, std::uint64_t bits) {
  auto it = std::lower_bound(basis.begin(), basis.end(), bits,
                             [](const SpinConfig& c, std::uint64_t b) { return c.bits < b; });
  assert(it != basis.end() && it->bits == bits && "exchange left the sector");
  return static_cast<std::size_t>(it - basis.begin());
}

inline double bond_zz(const SpinConfig& c) {
  double sum = 0.0;
  for (int i = 0; i + 1 < c.length; ++i) sum += c.sz(i) * c.sz(i + 1);
  return sum;
}

inline double edge_sz(const SpinConfig& c) {
  return c.length == 1 ? 2.0 * c.sz(0) : c.sz(0) + c.sz(c.length - 1);
}

/// Sets the symmetric exchange entries to `amplitude`; each pair is visited once.
inline void fill_exchange(Matrix& m, const std::vector<SpinConfig>& basis, double amplitude) {
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const SpinConfig& c = basis[a];
    for (int i = 0; i + 1 < c.length; ++i) {
      if (c.is_down(i) == c.is_down(i + 1)) continue;
      const std::uint64_t flipped = c.bits ^ (std::uint64_t{3} << i);
      const std::size_t b = config_index(basis, flipped);
      if (b > a) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = amplitude;
        m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = amplitude;
      }
    }
  }
}

}  // namespace detail

[[nodiscard]] inline SectorMatrix build_hamiltonian(const SectorKey& key, const ModelParams& params) {
  const auto basis = enumerate_sector(key);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  SectorMatrix out{key, params, Matrix::Zero(dim, dim)};
  const double chemical = (3.0 * key.L - 1.0) / 4.0;
  for (Eigen::Index a = 0; a < dim; ++a) {
    const SpinConfig& c = basis[static_cast<std::size_t>(a)];
    out.entries(a, a) = params.Delta * detail::bond_zz(c) - params.h * detail::edge_sz(c) + chemical;
  }
  detail::fill_exchange(out.entries, basis, params.J);
  return out;
}

/// dH/dDelta: diagonal, sum of Sz_i Sz_{i+1}.
[[nodiscard]] inline SectorMatrix build_dH_dDelta(const SectorKey& key) {
  const auto basis = enumerate_sector(key);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  SectorMatrix out{key, ModelParams::susy_point(), Matrix::Zero(dim, dim)};
  for (Eigen::Index a = 0; a < dim; ++a) {
    out.entries(a, a) = detail::bond_zz(basis[static_cast<std::size_t>(a)]);
  }
  return out;
}

/// dH/dJ: the bare nearest-neighbour exchange matrix.
[[nodiscard]] inline SectorMatrix build_dH_dJ(const SectorKey& key) {
  const auto basis = enumerate_sector(key);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  SectorMatrix out{key, ModelParams::susy_point(), Matrix::Zero(dim, dim)};
  detail::fill_exchange(out.entries, basis, 1.0);
  return out;
}

[[nodiscard]] inline SectorMatrix build_derivative(const SectorKey& key, Coupling c) {
  return c == Coupling::kDelta ? build_dH_dDelta(key) : build_dH_dJ(key);
}

}  // namespace susyxxz
