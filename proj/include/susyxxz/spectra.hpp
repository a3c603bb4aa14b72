/**
 * @file spectra.hpp
 * @brief Dense eigendecomposition of sector blocks and full chains.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "susyxxz/model.hpp"

namespace susyxxz {

/// |E| below this is a zero mode.
inline constexpr double kZeroModeTolerance = 1e-10;
/// Energies closer than this count as degenerate.
inline constexpr double kPairingTolerance = 1e-8;

struct ChainSectorSpectrum {
  SectorKey key;
  ModelParams params;
  Vector energies;  // ascending
  Matrix states;    // column k pairs with energies[k]

  [[nodiscard]] Eigen::Index size() const noexcept { return energies.size(); }
};

/// Every n_d block of one open chain.
struct FullChainSpectrum {
  int L = 1;
  ModelParams params;
  std::vector<ChainSectorSpectrum> blocks;  // blocks[n_d]

  [[nodiscard]] std::size_t level_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += static_cast<std::size_t>(b.size());
    return n;
  }
  [[nodiscard]] double min_energy() const {
    double m = INFINITY;
    for (const auto& b : blocks) {
      if (b.size() > 0) m = std::min(m, b.energies.minCoeff());
    }
    return m;
  }
};

/// Each eigenvector gets its largest-magnitude component positive, so
/// repeated solves (and cache entries) are reproducible.
[[nodiscard]] inline ChainSectorSpectrum diagonalize(const SectorMatrix& matrix) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix.entries, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw SolverError("eigensolver did not converge for sector " + to_string(matrix.key));
  }
  ChainSectorSpectrum out{matrix.key, matrix.params, solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.states.cols(); ++k) {
    Eigen::Index pivot = 0;
    out.states.col(k).cwiseAbs().maxCoeff(&pivot);
    if (out.states(pivot, k) < 0.0) out.states.col(k) *= -1.0;
  }
  return out;
}

[[nodiscard]] inline ChainSectorSpectrum solve_sector(const SectorKey& key, const ModelParams& params) {
  return diagonalize(build_hamiltonian(key, params));
}

class SpectrumCache;
[[nodiscard]] inline ChainSectorSpectrum solve_sector(const SectorKey& key, const ModelParams& params,
                                               const SpectrumCache* cache);

[[nodiscard]] inline FullChainSpectrum full_chain_spectrum(int L, const ModelParams& params,
                                                           const SpectrumCache* cache = nullptr) {
  if (L < 1 || L > kMaxChainLength) throw DomainError("chain length out of range: " + std::to_string(L));
  FullChainSpectrum out{L, params, {}};
  out.blocks.reserve(static_cast<std::size_t>(L) + 1);
  for (int nd = 0; nd <= L; ++nd) out.blocks.push_back(solve_sector({L, nd}, params, cache));
  return out;
}

/// Sum of exp(-beta E) over all 2^L levels.
[[nodiscard]] inline double partition_function(const FullChainSpectrum& spectrum, double beta) {
  if (beta < 0.0) throw DomainError("beta must be non-negative");
  double z = 0.0;
  for (const auto& b : spectrum.blocks) z += (-beta * b.energies.array()).exp().sum();
  return z;
}

}  // namespace susyxxz

// Cache-aware solve_sector is defined alongside the cache.
#include "susyxxz/spectrum_cache.hpp"
