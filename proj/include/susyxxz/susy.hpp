/**
 * @file susy.hpp
 * @brief N-sector spectra, zero-mode census and Witten-index estimators.
 *
 * The exact estimators here are the references the Monte Carlo dynamics
 * converge to:
 *
 *  - witten_regularized:  sum_levels (-1)^{n_d} exp(-beta0 E)
 *  - wtilde_gca_exact:    Gibbs average of (-1)^{n_d} over the N-sector
 *  - wtilde_qgca_exact:   canonical weights exp(-beta E)/Z_L per chain length,
 *                         Z_L the full-chain partition function
 *
 * Near the supersymmetric point the deviation of the GCA estimator is linear
 * in the coupling offset. slope_cN extracts the prefactor c_N so that
 *
 *   |W - W_susy| ~ c_N beta |dc|                 (N = 3j, no zero mode)
 *   |W - W_susy| ~ c_N beta exp(-beta E_1) |dc|  (N != 3j)
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "susyxxz/spectra.hpp"

namespace susyxxz {

struct SusyLevel {
  SectorKey key;
  double energy = 0.0;
  int parity = 1;
  std::optional<std::size_t> pair_id;
  Eigen::Index state_index = 0;  // column in the owning block's eigenvectors
};

struct SusySpectrum {
  int N = 3;
  ModelParams params;
  std::vector<SusyLevel> levels;             // block by block (ascending L), ascending energy
  std::vector<ChainSectorSpectrum> blocks;   // one per member of the N-sector
  int zero_mode_count = 0;
  std::optional<int> zero_mode_length;       // L hosting the first zero mode
  int m = 0;                                 // 1 if a zero mode exists
  std::size_t pair_count = 0;

  /// Smallest energy above the pairing tolerance, i.e. the gap above E = 0.
  [[nodiscard]] std::optional<double> lowest_positive_energy() const {
    std::optional<double> e1;
    for (const auto& l : levels) {
      if (l.energy > kPairingTolerance && (!e1 || l.energy < *e1)) e1 = l.energy;
    }
    return e1;
  }

  [[nodiscard]] const ChainSectorSpectrum& block_of(const SusyLevel& level) const {
    return blocks[static_cast<std::size_t>(level.key.L - blocks.front().key.L)];
  }
};

namespace detail {

/// Greedy SUSY partner matching. Levels are clustered by energy; within a
/// cluster every unpaired level at length L takes the first unpaired level
/// at length L+1 (opposite parity within an N-sector). On this path-shaped
/// structure greedy is a maximum matching.
inline std::size_t pair_levels(std::vector<SusyLevel>& levels) {
  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return levels[a].energy < levels[b].energy; });

  std::size_t next_id = 0;
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() &&
           levels[order[end]].energy - levels[order[end - 1]].energy <= kPairingTolerance) {
      ++end;
    }
    std::vector<std::size_t> cluster(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
    std::stable_sort(cluster.begin(), cluster.end(),
                     [&](std::size_t a, std::size_t b) { return levels[a].key.L < levels[b].key.L; });
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      SusyLevel& lo = levels[cluster[i]];
      if (lo.pair_id || std::abs(lo.energy) < kZeroModeTolerance) continue;
      for (std::size_t j = i + 1; j < cluster.size(); ++j) {
        SusyLevel& hi = levels[cluster[j]];
        if (hi.pair_id || hi.key.L != lo.key.L + 1) continue;
        if (std::abs(hi.energy - lo.energy) > kPairingTolerance || hi.parity == lo.parity) continue;
        lo.pair_id = hi.pair_id = next_id++;
        break;
      }
    }
    begin = end;
  }
  return next_id;
}

/// exp(-beta (E - shift)) for each level.
inline std::vector<double> boltzmann(const std::vector<SusyLevel>& levels, double beta) {
  double shift = INFINITY;
  for (const auto& l : levels) shift = std::min(shift, l.energy);
  std::vector<double> w(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) w[i] = std::exp(-beta * (levels[i].energy - shift));
  return w;
}

}  // namespace detail

[[nodiscard]] inline SusySpectrum assemble(int N, const ModelParams& params, const SpectrumCache* cache = nullptr) {
  const NSector sector = decompose_n_sector(N);
  SusySpectrum out;
  out.N = N;
  out.params = params;
  for (const SectorKey& key : sector.members) {
    out.blocks.push_back(solve_sector(key, params, cache));
    const auto& block = out.blocks.back();
    for (Eigen::Index k = 0; k < block.size(); ++k) {
      out.levels.push_back({key, block.energies[k], key.parity(), std::nullopt, k});
    }
  }
  for (const auto& l : out.levels) {
    if (std::abs(l.energy) < kZeroModeTolerance) {
      if (!out.zero_mode_length) out.zero_mode_length = l.key.L;
      ++out.zero_mode_count;
    }
  }
  out.m = out.zero_mode_count > 0 ? 1 : 0;
  out.pair_count = detail::pair_levels(out.levels);
  return out;
}

/// Tr[(-1)^F exp(-beta0 H)] over the N-sector.
[[nodiscard]] inline double witten_regularized(const SusySpectrum& spec, double beta0) {
  if (beta0 < 0.0) throw DomainError("beta0 must be non-negative");
  double w = 0.0;
  for (const auto& l : spec.levels) w += l.parity * std::exp(-beta0 * l.energy);
  return w;
}

/// Gibbs average of the parity over the sector's levels.
[[nodiscard]] inline double wtilde_gca_exact(const SusySpectrum& spec, double beta) {
  if (beta < 0.0) throw DomainError("beta must be non-negative");
  const auto w = detail::boltzmann(spec.levels, beta);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += spec.levels[i].parity * w[i];
    den += w[i];
  }
  return num / den;
}

/// How the per-chain canonical contributions are combined.
enum class QgcaNormalization {
  /// Parity averaged over all legitimate (in-sector) weight across chains:
  /// sum_L p_L P_L / sum_L P_L with P_L the in-sector canonical probability.
  kLegitimatePool,
  /// Plain sum over chains, sum_L p_L P_L.
  kPerChain,
};

[[nodiscard]] inline std::string to_string(QgcaNormalization n) {
  return n == QgcaNormalization::kLegitimatePool ? "legitimate-pool" : "per-chain";
}

/// In-sector canonical probability P_L of each member chain.
[[nodiscard]] inline std::vector<double> qgca_sector_weights(int N, const ModelParams& params, double beta,
                                                             const SpectrumCache* cache = nullptr) {
  if (beta < 0.0) throw DomainError("beta must be non-negative");
  const NSector sector = decompose_n_sector(N);
  std::vector<double> weights;
  for (const SectorKey& key : sector.members) {
    const FullChainSpectrum chain = full_chain_spectrum(key.L, params, cache);
    const double shift = chain.min_energy();
    double z = 0.0;
    for (const auto& b : chain.blocks) z += (-beta * (b.energies.array() - shift)).exp().sum();
    const auto& in_sector = chain.blocks[static_cast<std::size_t>(key.n_d)].energies;
    weights.push_back((-beta * (in_sector.array() - shift)).exp().sum() / z);
  }
  return weights;
}

[[nodiscard]] inline double wtilde_qgca_exact(int N, const ModelParams& params, double beta,
                                              QgcaNormalization norm = QgcaNormalization::kLegitimatePool,
                                              const SpectrumCache* cache = nullptr) {
  const NSector sector = decompose_n_sector(N);
  const auto weights = qgca_sector_weights(N, params, beta, cache);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    num += sector.members[i].parity() * weights[i];
    den += weights[i];
  }
  return norm == QgcaNormalization::kPerChain ? num : num / den;
}

/// Hellmann-Feynman slopes <psi|dH/dc|psi> for every level, in level order.
/// Within a degenerate block subspace the individual values depend on the
/// basis, but their sum (all that Gibbs averages see) does not.
[[nodiscard]] inline std::vector<double> level_slopes(const SusySpectrum& spec, Coupling c) {
  std::vector<Matrix> derivs;
  for (const auto& b : spec.blocks) derivs.push_back(build_derivative(b.key, c).entries);
  std::vector<double> slopes;
  slopes.reserve(spec.levels.size());
  for (const auto& l : spec.levels) {
    const auto idx = static_cast<std::size_t>(l.key.L - spec.blocks.front().key.L);
    const auto psi = spec.blocks[idx].states.col(l.state_index);
    slopes.push_back(psi.dot(derivs[idx] * psi));
  }
  return slopes;
}

/// dW_gca/dc from level slopes: -beta (<p E'> - <p><E'>).
[[nodiscard]] inline double gca_derivative_hellmann_feynman(const SusySpectrum& spec, double beta, Coupling c) {
  const auto w = detail::boltzmann(spec.levels, beta);
  const auto slopes = level_slopes(spec, c);
  double z = 0.0, pw = 0.0, pe = 0.0, e = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double p = spec.levels[i].parity;
    z += w[i];
    pw += p * w[i];
    pe += p * slopes[i] * w[i];
    e += slopes[i] * w[i];
  }
  return -beta * (pe / z - (pw / z) * (e / z));
}

inline constexpr double kSlopeStep = 1e-4;
inline constexpr double kSlopeAgreement = 0.01;
inline constexpr double kSlopeConsistencyLimit = 0.05;

struct SlopeEstimate {
  int N = 3;
  double beta = 0.0;
  Coupling coupling = Coupling::kDelta;
  double derivative_fd = 0.0;  // central difference of wtilde_gca_exact
  double derivative_hf = 0.0;  // Hellmann-Feynman
  bool zero_mode = false;
  double E1 = 0.0;  // lowest positive energy at the base point
  double c_N = 0.0;

  [[nodiscard]] double relative_disagreement() const {
    const double scale = std::max(std::abs(derivative_fd), std::abs(derivative_hf));
    return scale < 1e-12 ? 0.0 : std::abs(derivative_fd - derivative_hf) / scale;
  }
};

/// c_N from the slope of the GCA estimator at `base` (the SUSY point by
/// default). For sectors with a zero mode the exp(-beta E_1) suppression is
/// divided out so c_N measures the splitting slope alone.
[[nodiscard]] inline SlopeEstimate slope_cN(int N, double beta, Coupling c,
                                            const ModelParams& base = ModelParams::susy_point(),
                                            const SpectrumCache* cache = nullptr) {
  if (beta <= 0.0) throw DomainError("slope extraction needs beta > 0");
  const SusySpectrum spec = assemble(N, base, cache);
  const double c0 = coupling_value(base, c);
  const double up = wtilde_gca_exact(assemble(N, with_coupling(base, c, c0 + kSlopeStep), cache), beta);
  const double dn = wtilde_gca_exact(assemble(N, with_coupling(base, c, c0 - kSlopeStep), cache), beta);

  SlopeEstimate s;
  s.N = N;
  s.beta = beta;
  s.coupling = c;
  s.derivative_fd = (up - dn) / (2.0 * kSlopeStep);
  s.derivative_hf = gca_derivative_hellmann_feynman(spec, beta, c);
  s.zero_mode = spec.m == 1;
  s.E1 = spec.lowest_positive_energy().value_or(0.0);
  if (s.relative_disagreement() > kSlopeConsistencyLimit) {
    throw ConsistencyError("finite-difference and Hellmann-Feynman slopes disagree for N=" + std::to_string(N) +
                           ": " + shortest_decimal(s.derivative_fd) + " vs " + shortest_decimal(s.derivative_hf));
  }
  s.c_N = std::abs(s.derivative_fd) / beta;
  if (s.zero_mode) s.c_N *= std::exp(beta * s.E1);
  return s;
}

/// First-order deviation law evaluated with a previously extracted slope.
[[nodiscard]] inline double deviation_first_order(const SlopeEstimate& s, double delta_coupling) {
  const double linear = s.c_N * s.beta * std::abs(delta_coupling);
  return s.zero_mode ? linear * std::exp(-s.beta * s.E1) : linear;
}

[[nodiscard]] inline double deviation_first_order(int N, double beta, Coupling c, double delta_coupling,
                                                  const SpectrumCache* cache = nullptr) {
  return deviation_first_order(slope_cN(N, beta, c, ModelParams::susy_point(), cache), delta_coupling);
}

}  // namespace susyxxz
