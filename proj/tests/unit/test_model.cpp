#include <gtest/gtest.h>

#include "susyxxz/model.hpp"

using namespace susyxxz;

namespace {
const ModelParams kSusy = ModelParams::susy_point();

void expect_matrix(const Matrix& m, std::initializer_list<std::initializer_list<double>> expected) {
  ASSERT_EQ(m.rows(), static_cast<Eigen::Index>(expected.size()));
  Eigen::Index i = 0;
  for (const auto& row : expected) {
    Eigen::Index j = 0;
    for (double v : row) {
      EXPECT_DOUBLE_EQ(m(i, j), v) << "entry (" << i << "," << j << ")";
      ++j;
    }
    ++i;
  }
}
}  // namespace

TEST(ModelParams, SusyPredicate) {
  EXPECT_TRUE(kSusy.is_susy_point());
  EXPECT_FALSE((ModelParams{-1.0, 1.0000001, 0.5}).is_susy_point());
}

// Hand evaluation: diagonal (3L-1)/4 + Delta sum s_i s_{i+1} - h (s_1 + s_L).
TEST(BuildHamiltonian, HandGoldens) {
  expect_matrix(build_hamiltonian({2, 1}, kSusy).entries, {{1, -1}, {-1, 1}});
  expect_matrix(build_hamiltonian({3, 0}, kSusy).entries, {{2}});
  expect_matrix(build_hamiltonian({1, 1}, kSusy).entries, {{1}});
  expect_matrix(build_hamiltonian({1, 0}, kSusy).entries, {{0}});
  expect_matrix(build_hamiltonian({2, 0}, kSusy).entries, {{1}});
}

TEST(BuildDerivatives, HandGoldens) {
  expect_matrix(build_dH_dDelta({2, 1}).entries, {{-0.25, 0}, {0, -0.25}});
  expect_matrix(build_dH_dDelta({3, 0}).entries, {{0.5}});
  expect_matrix(build_dH_dDelta({1, 1}).entries, {{0}});
  expect_matrix(build_dH_dJ({2, 1}).entries, {{0, 1}, {1, 0}});
  expect_matrix(build_dH_dJ({3, 0}).entries, {{0}});
  expect_matrix(build_dH_dJ({1, 1}).entries, {{0}});
}

TEST(BuildHamiltonian, ExactlySymmetric) {
  const ModelParams p{-0.731, 1.27, 0.413};
  for (int L = 1; L <= 9; ++L) {
    for (int nd = 0; nd <= L; ++nd) {
      const Matrix m = build_hamiltonian({L, nd}, p).entries;
      EXPECT_TRUE((m.array() == m.transpose().array()).all()) << to_string(SectorKey{L, nd});
    }
  }
}

TEST(BuildHamiltonian, FiniteDifferenceMatchesDerivativeOperators) {
  const double eps = 1e-4;
  for (const SectorKey key : {SectorKey{4, 2}, SectorKey{5, 1}, SectorKey{6, 3}, SectorKey{2, 1}}) {
    ModelParams up = kSusy, dn = kSusy;
    up.Delta += eps;
    dn.Delta -= eps;
    Matrix fd = (build_hamiltonian(key, up).entries - build_hamiltonian(key, dn).entries) / (2 * eps);
    EXPECT_LT((fd - build_dH_dDelta(key).entries).cwiseAbs().maxCoeff(), 1e-10);

    up = kSusy;
    dn = kSusy;
    up.J += eps;
    dn.J -= eps;
    fd = (build_hamiltonian(key, up).entries - build_hamiltonian(key, dn).entries) / (2 * eps);
    EXPECT_LT((fd - build_dH_dJ(key).entries).cwiseAbs().maxCoeff(), 1e-10);
  }
}

// Total S^z is conserved, so the full-chain Hamiltonian built from scratch in
// the 2^L product basis must have no matrix element between blocks.
TEST(BuildHamiltonian, BlocksReproduceFullChainOperator) {
  const int L = 5;
  const ModelParams p{-0.8, 1.3, 0.4};
  const int dim = 1 << L;
  Matrix full = Matrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const SpinConfig c{static_cast<std::uint64_t>(a), L};
    double diag = (3.0 * L - 1.0) / 4.0 - p.h * (c.sz(0) + c.sz(L - 1));
    for (int i = 0; i + 1 < L; ++i) {
      diag += p.Delta * c.sz(i) * c.sz(i + 1);
      if (c.is_down(i) != c.is_down(i + 1)) full(a, a ^ (3 << i)) = p.J;
    }
    full(a, a) = diag;
  }
  for (int nd = 0; nd <= L; ++nd) {
    const auto basis = enumerate_sector({L, nd});
    const Matrix block = build_hamiltonian({L, nd}, p).entries;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      double row_norm_in_block = 0.0;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        EXPECT_DOUBLE_EQ(block(i, j), full(basis[i].bits, basis[j].bits));
        row_norm_in_block += std::abs(full(basis[i].bits, basis[j].bits));
      }
      EXPECT_DOUBLE_EQ(row_norm_in_block, full.row(basis[i].bits).cwiseAbs().sum());
    }
  }
}
