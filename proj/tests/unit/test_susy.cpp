#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "charpoly_oracle.hpp"
#include "susyxxz/susy.hpp"

using namespace susyxxz;

namespace {
const ModelParams kSusy = ModelParams::susy_point();

int witten_sign(int N) { return (N / 3) % 2 == 0 ? 1 : -1; }

/// Full 2^L chain Hamiltonian in the product basis, built without the block code.
Matrix full_chain_matrix(int L, const ModelParams& p) {
  const int dim = 1 << L;
  Matrix h = Matrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const SpinConfig c{static_cast<std::uint64_t>(a), L};
    double diag = (3.0 * L - 1.0) / 4.0 - p.h * (L == 1 ? 2 * c.sz(0) : c.sz(0) + c.sz(L - 1));
    for (int i = 0; i + 1 < L; ++i) {
      diag += p.Delta * c.sz(i) * c.sz(i + 1);
      if (c.is_down(i) != c.is_down(i + 1)) h(a, a ^ (3 << i)) = p.J;
    }
    h(a, a) = diag;
  }
  return h;
}

double oracle_partition(int L, double beta) {
  double z = 0.0;
  for (double e : oracle::eigenvalues(full_chain_matrix(L, kSusy))) z += std::exp(-beta * e);
  return z;
}
}  // namespace

TEST(Assemble, N4HandSpectrum) {
  const auto s = assemble(4, kSusy);
  ASSERT_EQ(s.levels.size(), 3U);
  EXPECT_EQ(s.levels[0].key, (SectorKey{2, 1}));
  EXPECT_NEAR(s.levels[0].energy, 0.0, 1e-14);
  EXPECT_EQ(s.levels[0].parity, -1);
  EXPECT_NEAR(s.levels[1].energy, 2.0, 1e-14);
  EXPECT_EQ(s.levels[1].parity, -1);
  EXPECT_EQ(s.levels[2].key, (SectorKey{3, 0}));
  EXPECT_NEAR(s.levels[2].energy, 2.0, 1e-14);
  EXPECT_EQ(s.levels[2].parity, 1);
  EXPECT_EQ(s.zero_mode_count, 1);
  EXPECT_EQ(s.zero_mode_length, 2);
  EXPECT_EQ(s.m, 1);
  ASSERT_TRUE(s.levels[1].pair_id && s.levels[2].pair_id);
  EXPECT_EQ(*s.levels[1].pair_id, *s.levels[2].pair_id);
  EXPECT_FALSE(s.levels[0].pair_id);
}

TEST(Assemble, N3HandSpectrum) {
  const auto s = assemble(3, kSusy);
  ASSERT_EQ(s.levels.size(), 2U);
  EXPECT_EQ(s.levels[0].key, (SectorKey{1, 1}));
  EXPECT_DOUBLE_EQ(s.levels[0].energy, 1.0);
  EXPECT_EQ(s.levels[1].key, (SectorKey{2, 0}));
  EXPECT_DOUBLE_EQ(s.levels[1].energy, 1.0);
  EXPECT_EQ(s.zero_mode_count, 0);
  EXPECT_EQ(s.m, 0);
  EXPECT_EQ(s.pair_count, 1U);
}

TEST(Assemble, ZeroModeCensusAndPairing) {
  for (int N = 3; N <= 12; ++N) {
    const auto s = assemble(N, kSusy);
    std::size_t dim = 0;
    for (const auto& key : decompose_n_sector(N).members) dim += binomial(key.L, key.n_d);
    EXPECT_EQ(s.levels.size(), dim);
    EXPECT_EQ(s.zero_mode_count, N % 3 == 0 ? 0 : 1) << "N=" << N;
    EXPECT_EQ(s.m, N % 3 == 0 ? 0 : 1);

    std::map<std::size_t, std::vector<const SusyLevel*>> pairs;
    for (const auto& l : s.levels) {
      EXPECT_GE(l.energy, -1e-10);
      EXPECT_EQ(l.parity, l.key.n_d % 2 == 0 ? 1 : -1);
      if (std::abs(l.energy) < kZeroModeTolerance) {
        EXPECT_EQ(l.parity, witten_sign(N)) << "zero mode parity, N=" << N;
      } else if (l.energy > kPairingTolerance) {
        ASSERT_TRUE(l.pair_id.has_value()) << "unpaired level N=" << N << " E=" << l.energy;
        pairs[*l.pair_id].push_back(&l);
      }
    }
    for (const auto& [id, members] : pairs) {
      ASSERT_EQ(members.size(), 2U);
      EXPECT_NE(members[0]->parity, members[1]->parity);
      EXPECT_NEAR(members[0]->energy, members[1]->energy, kPairingTolerance);
    }
  }
}

TEST(Assemble, NoPairingAwayFromSusyPoint) {
  const auto s = assemble(6, ModelParams{-1.0, 1.3, 0.5});
  EXPECT_EQ(s.zero_mode_count, 0);
  EXPECT_LT(s.pair_count, s.levels.size() / 2);
}

TEST(WittenRegularized, IndexValuesAndCutoffIndependence) {
  EXPECT_NEAR(witten_regularized(assemble(4, kSusy), 1.0), -1.0, 1e-9);
  EXPECT_NEAR(witten_regularized(assemble(3, kSusy), 1.0), 0.0, 1e-9);
  EXPECT_NEAR(witten_regularized(assemble(5, kSusy), 3.0), -1.0, 1e-9);
  EXPECT_NEAR(witten_regularized(assemble(7, kSusy), 3.0), 1.0, 1e-9);
  for (int N = 3; N <= 11; ++N) {
    const auto s = assemble(N, kSusy);
    const double expected = N % 3 == 0 ? 0.0 : witten_sign(N);
    for (double b0 : {0.1, 1.0, 5.0, 10.0}) EXPECT_NEAR(witten_regularized(s, b0), expected, 1e-9) << N;
  }
  EXPECT_THROW((void)witten_regularized(assemble(4, kSusy), -0.1), DomainError);
}

TEST(WtildeGcaExact, Values) {
  for (double beta : {0.0, 0.5, 5.0, 30.0}) EXPECT_EQ(wtilde_gca_exact(assemble(3, kSusy), beta), 0.0);
  EXPECT_NEAR(wtilde_gca_exact(assemble(4, kSusy), 5.0), -1.0 / (1.0 + 2.0 * std::exp(-10.0)), 1e-14);
  for (int N = 3; N <= 9; ++N) {
    const auto s = assemble(N, kSusy);
    double parity_sum = 0.0;
    for (const auto& l : s.levels) parity_sum += l.parity;
    EXPECT_NEAR(wtilde_gca_exact(s, 0.0), parity_sum / static_cast<double>(s.levels.size()), 1e-14);
  }
}

TEST(WtildeQgcaExact, N4AgainstBruteForceChains) {
  const double beta = 5.0;
  const double z2 = oracle_partition(2, beta);
  const double z3 = oracle_partition(3, beta);
  EXPECT_NEAR(z2, 1.0 + std::exp(-5.0) + 2.0 * std::exp(-10.0), 1e-12);
  const double p2 = (1.0 + std::exp(-10.0)) / z2;  // (2,1): E = 0, 2
  const double p3 = std::exp(-10.0) / z3;          // (3,0): E = 2
  EXPECT_NEAR(wtilde_qgca_exact(4, kSusy, beta, QgcaNormalization::kPerChain), -p2 + p3, 1e-12);
  EXPECT_NEAR(wtilde_qgca_exact(4, kSusy, beta, QgcaNormalization::kLegitimatePool), (-p2 + p3) / (p2 + p3), 1e-12);
}

TEST(WtildeQgcaExact, LowTemperatureLimit) {
  for (int N = 3; N <= 11; ++N) {
    const double expected = N % 3 == 0 ? 0.0 : witten_sign(N);
    for (auto norm : {QgcaNormalization::kLegitimatePool, QgcaNormalization::kPerChain}) {
      EXPECT_NEAR(wtilde_qgca_exact(N, kSusy, 80.0, norm), expected, 1e-6) << "N=" << N;
    }
  }
}

TEST(WtildeQgcaExact, LowTemperatureEquivalenceWithGca) {
  for (int N = 3; N <= 11; ++N) {
    const double gap = std::abs(wtilde_gca_exact(assemble(N, kSusy), 5.0) - wtilde_qgca_exact(N, kSusy, 5.0));
    if (N == 9) {
      // Known exception to the 1e-3 bound: chains in the N=9 window carry
      // low excitations of other sectors (0.41, 0.26), so Z_L is still far
      // from 1 at beta=5.
      EXPECT_NEAR(gap, 3.94e-3, 1e-4);
    } else {
      EXPECT_LE(gap, 1e-3) << "N=" << N;
    }
  }
  bool broken = false;
  for (int N = 6; N <= 11; ++N) {
    broken |= std::abs(wtilde_gca_exact(assemble(N, kSusy), 2.0) - wtilde_qgca_exact(N, kSusy, 2.0)) > 1e-2;
  }
  EXPECT_TRUE(broken);
}

TEST(LevelSlopes, ZeroModeOfTwoSiteChain) {
  const auto s = assemble(4, kSusy);
  const auto slopes = level_slopes(s, Coupling::kDelta);
  EXPECT_NEAR(slopes[0], -0.25, 1e-14);
  EXPECT_NEAR(slopes[2], 0.5, 1e-14);  // |up up up>
}

TEST(SlopeCN, ThreeSiteSectorHandValues) {
  // W(Delta) for N=3: E(1,1) = 1, E(2,0) = 3/4 + Delta/4, so dW/dDelta = -beta/8.
  const auto d = slope_cN(3, 5.0, Coupling::kDelta);
  EXPECT_NEAR(d.derivative_hf, -5.0 / 8.0, 1e-12);
  EXPECT_NEAR(d.c_N, 0.125, 1e-7);
  const auto j = slope_cN(3, 5.0, Coupling::kJ);
  EXPECT_EQ(j.derivative_hf, 0.0);
  EXPECT_EQ(j.c_N, 0.0);
  EXPECT_EQ(deviation_first_order(3, 5.0, Coupling::kJ, 0.3), 0.0);
}

TEST(SlopeCN, FiniteDifferenceAgreesWithHellmannFeynman) {
  for (int N = 3; N <= 8; ++N) {
    for (auto c : {Coupling::kDelta, Coupling::kJ}) {
      for (double beta : {2.0, 5.0}) {
        const auto s = slope_cN(N, beta, c);
        EXPECT_LE(s.relative_disagreement(), 0.01) << "N=" << N << " " << to_string(c) << " beta=" << beta;
      }
    }
  }
}

TEST(SlopeCN, SixSiteValueAndBetaStability) {
  EXPECT_NEAR(slope_cN(6, 5.0, Coupling::kDelta).c_N, 0.0366, 5e-4);
  for (int N = 3; N <= 11; ++N) {
    const double c4 = slope_cN(N, 4.0, Coupling::kDelta).c_N;
    const double c5 = slope_cN(N, 5.0, Coupling::kDelta).c_N;
    EXPECT_LE(std::abs(c4 - c5) / c5, 0.10) << "N=" << N;
  }
}

TEST(DeviationFirstOrder, Laws) {
  const auto s6 = slope_cN(6, 5.0, Coupling::kDelta);
  EXPECT_DOUBLE_EQ(deviation_first_order(s6, -0.02), s6.c_N * 5.0 * 0.02);
  const auto s7 = slope_cN(7, 5.0, Coupling::kDelta);
  EXPECT_DOUBLE_EQ(deviation_first_order(s7, 0.02), s7.c_N * 5.0 * std::exp(-5.0 * s7.E1) * 0.02);
  EXPECT_NEAR(s7.E1, 1.3819660112501, 1e-9);  // (5 - sqrt 5)/2
  EXPECT_THROW((void)slope_cN(6, 0.0, Coupling::kDelta), DomainError);
}
