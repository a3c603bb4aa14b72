/**
 * @file basis.hpp
 * @brief Product-state bases of open spin-1/2 chains.
 *
 * A configuration is a bit string where bit i set means the spin at site
 * i+1 points down. With that layout the down-spin count n_d (the fermion
 * number of the supersymmetric chain) is a popcount, and the parity
 * (-1)^{n_d} is its lowest bit.
 *
 * Chains of length L with n_d down spins form the block (L, n_d). Blocks
 * with L + n_d + 1 = N make up the N-sector, which is the unit the
 * supercharges act within.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "susyxxz/errors.hpp"

namespace susyxxz {

/// Longest chain the bit layout supports.
inline constexpr int kMaxChainLength = 30;

struct SpinConfig {
  std::uint64_t bits = 0;
  int length = 0;

  [[nodiscard]] constexpr bool is_down(int site) const noexcept {
    return ((bits >> site) & 1U) != 0;
  }
  /// S^z at a 0-based site, +1/2 for up and -1/2 for down.
  [[nodiscard]] constexpr double sz(int site) const noexcept {
    return is_down(site) ? -0.5 : 0.5;
  }
  [[nodiscard]] constexpr int down_count() const noexcept {
    return std::popcount(bits);
  }

  friend constexpr bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

struct SectorKey {
  int L = 1;
  int n_d = 0;

  [[nodiscard]] constexpr int parity() const noexcept { return (n_d % 2 == 0) ? 1 : -1; }
  [[nodiscard]] constexpr int n_sector() const noexcept { return L + n_d + 1; }

  friend constexpr auto operator<=>(const SectorKey&, const SectorKey&) = default;
};

inline std::string to_string(const SectorKey& key) {
  return "(L=" + std::to_string(key.L) + ", n_d=" + std::to_string(key.n_d) + ")";
}

inline void validate(const SectorKey& key) {
  if (key.L < 1 || key.L > kMaxChainLength || key.n_d < 0 || key.n_d > key.L) {
    throw DomainError("invalid sector key " + to_string(key));
  }
}

/// Exact binomial coefficient for the small arguments used here.
[[nodiscard]] constexpr std::uint64_t binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

[[nodiscard]] inline std::uint64_t sector_dimension(const SectorKey& key) {
  validate(key);
  return binomial(key.L, key.n_d);
}

/// All configurations of the block, sorted by increasing bit pattern.
[[nodiscard]] inline std::vector<SpinConfig> enumerate_sector(const SectorKey& key) {
  validate(key);
  std::vector<SpinConfig> configs;
  configs.reserve(binomial(key.L, key.n_d));
  if (key.n_d == 0) {
    configs.push_back({0, key.L});
    return configs;
  }
  // Gosper's hack: next larger integer with the same popcount.
  const std::uint64_t limit = std::uint64_t{1} << key.L;
  std::uint64_t v = (std::uint64_t{1} << key.n_d) - 1;
  while (v < limit) {
    configs.push_back({v, key.L});
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return configs;
}

struct NSector {
  int N = 3;
  std::vector<SectorKey> members;  // ascending L, contiguous

  [[nodiscard]] int L_min() const { return members.front().L; }
  [[nodiscard]] int L_max() const { return members.back().L; }
};

/// Blocks (L, N-L-1) with ceil((N-1)/2) <= L <= N-1.
[[nodiscard]] inline NSector decompose_n_sector(int N) {
  if (N < 3) throw DomainError("N-sector label must be >= 3, got " + std::to_string(N));
  if (N - 1 > kMaxChainLength) throw DomainError("N-sector " + std::to_string(N) + " too large");
  NSector sector{N, {}};
  for (int L = N / 2; L <= N - 1; ++L) {  // N/2 == ceil((N-1)/2)
    sector.members.push_back({L, N - L - 1});
  }
  return sector;
}

}  // namespace susyxxz
