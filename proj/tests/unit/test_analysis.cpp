#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "susyxxz/analysis.hpp"

using namespace susyxxz;

namespace {
SweepSpec exact_spec(Coupling c, std::vector<double> values, std::vector<int> Ns, double beta = 5.0) {
  SweepSpec s;
  s.coupling = c;
  s.values = std::move(values);
  s.N_list = std::move(Ns);
  s.beta = beta;
  s.estimator = Estimator::kExactGca;
  return s;
}
}  // namespace

TEST(DefaultGrid, SpansHalfUnitAroundSusyValue) {
  const auto d = default_grid(Coupling::kDelta);
  ASSERT_EQ(d.size(), 21U);
  EXPECT_DOUBLE_EQ(d.front(), 0.5);
  EXPECT_DOUBLE_EQ(d.back(), 1.5);
  EXPECT_DOUBLE_EQ(d[10], 1.0);
  const auto j = default_grid(Coupling::kJ, 5);
  EXPECT_DOUBLE_EQ(j.front(), -1.5);
  EXPECT_DOUBLE_EQ(j[2], -1.0);
  EXPECT_DOUBLE_EQ(j.back(), -0.5);
  EXPECT_THROW((void)default_grid(Coupling::kJ, 1), ConfigError);
}

TEST(Sweep, RecordsOrderedAndSusyPointHasZeroDeviation) {
  const auto recs = sweep(exact_spec(Coupling::kDelta, {1.2, 1.0, 0.8}, {5, 4}));
  ASSERT_EQ(recs.size(), 6U);
  EXPECT_EQ(recs[0].N, 4);
  EXPECT_EQ(recs[3].N, 5);
  EXPECT_DOUBLE_EQ(recs[0].value, 0.8);
  EXPECT_DOUBLE_EQ(recs[1].value, 1.0);
  for (const auto& r : recs) {
    if (r.value == 1.0) {
      EXPECT_EQ(r.deviation, 0.0);
      EXPECT_EQ(r.first_order_prediction, 0.0);
    } else {
      EXPECT_GT(r.deviation, 0.0);
    }
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_DOUBLE_EQ(r.deviation, std::abs(r.wtilde - r.wtilde_susy));
  }
}

TEST(Sweep, ReferenceMatchesExactAtSusyPoint) {
  const auto recs = sweep(exact_spec(Coupling::kDelta, {0.9, 1.1}, {6}));
  const double ref = wtilde_gca_exact(assemble(6, ModelParams::susy_point()), 5.0);
  for (const auto& r : recs) EXPECT_DOUBLE_EQ(r.wtilde_susy, ref);
}

TEST(Sweep, ThreeSiteSectorIsInsensitiveToJ) {
  // N=3 is a single L=2 all-up chain sector; J only mixes states outside it.
  const auto recs = sweep(exact_spec(Coupling::kJ, default_grid(Coupling::kJ, 11), {3}));
  for (const auto& r : recs) {
    EXPECT_NEAR(r.deviation, 0.0, 1e-12) << r.value;
    EXPECT_NEAR(r.first_order_prediction, 0.0, 1e-12);
  }
}

TEST(Sweep, InvalidSpecs) {
  EXPECT_THROW((void)sweep(exact_spec(Coupling::kDelta, {}, {3})), ConfigError);
  EXPECT_THROW((void)sweep(exact_spec(Coupling::kDelta, {1.0}, {})), ConfigError);
  EXPECT_THROW((void)sweep(exact_spec(Coupling::kDelta, {1.0}, {3}, 0.0)), ConfigError);
}

// Deviation / |dc| approaches the first-order slope, with error O(dc).
TEST(FirstOrder, DeviationConvergesLinearly) {
  int checked = 0;
  for (int N : {4, 5, 6, 7}) {
    for (Coupling c : {Coupling::kDelta, Coupling::kJ}) {
      const SlopeEstimate s = slope_cN(N, 5.0, c);
      const double predicted = deviation_first_order(s, 1.0);
      if (predicted < 1e-10) continue;
      ++checked;
      double previous = INFINITY;
      for (double d : {0.02, 0.01, 0.005}) {
        const auto recs = sweep(exact_spec(c, {susy_value(c) + d}, {N}));
        const double err = std::abs(recs[0].deviation / d - predicted);
        EXPECT_LT(err, previous) << "N=" << N << " " << to_string(c) << " d=" << d;
        if (std::isfinite(previous)) {
          EXPECT_NEAR(err / previous, 0.5, 0.15) << "N=" << N << " d=" << d;
        }
        previous = err;
      }
    }
  }
  EXPECT_GE(checked, 6);
}

TEST(CompareFirstOrder, AgreesOnSmallOffsetGrid) {
  std::vector<double> values;
  for (int i = -5; i <= 5; ++i) values.push_back(1.0 + 0.01 * i);
  const auto report = compare_first_order(sweep(exact_spec(Coupling::kDelta, values, {4, 5, 6, 7, 8})));
  ASSERT_EQ(report.rows.size(), 5U);
  for (const auto& r : report.rows) {
    EXPECT_EQ(r.points, 10);
    EXPECT_LT(r.relative_discrepancy, 0.1) << "N=" << r.N;
    EXPECT_FALSE(r.nonlinear) << "N=" << r.N;
  }
  const auto j = to_json(report);
  EXPECT_EQ(j["fits"].size(), 5U);
  EXPECT_EQ(j["fits"][0]["N"], 4);
}

TEST(CompareFirstOrder, SyntheticLinearData) {
  std::vector<SweepRecord> recs;
  for (double x : {-0.04, -0.02, 0.0, 0.02, 0.04}) {
    SweepRecord r;
    r.N = 4;
    r.value = 1.0 + x;
    r.deviation = 2.0 * std::abs(x);
    r.first_order_prediction = 2.2 * std::abs(x);
    recs.push_back(r);
  }
  const auto rep = compare_first_order(recs);
  ASSERT_EQ(rep.rows.size(), 1U);
  EXPECT_EQ(rep.rows[0].points, 4);
  EXPECT_NEAR(rep.rows[0].fitted_slope, 2.0, 1e-12);
  EXPECT_NEAR(rep.rows[0].predicted_slope, 2.2, 1e-12);
  EXPECT_NEAR(rep.rows[0].relative_discrepancy, 0.2 / 2.2, 1e-12);
  EXPECT_NEAR(rep.rows[0].max_residual, 0.0, 1e-12);
  EXPECT_FALSE(rep.rows[0].nonlinear);

  recs[0].deviation = 0.5;
  EXPECT_TRUE(compare_first_order(recs).rows[0].nonlinear);
}

TEST(CompareFirstOrder, TooFewPointsIsAnError) {
  const auto recs = sweep(exact_spec(Coupling::kDelta, {0.96, 1.0, 1.04, 1.4}, {4}));
  EXPECT_THROW((void)compare_first_order(recs), FitError);
}

TEST(Protection, RatiosFollowExpectation) {
  const auto rep = protection_report(2.0, 5.0, {3, 4, 5, 6, 7});
  ASSERT_EQ(rep.rows.size(), 5U);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.zero_mode, r.N % 3 != 0) << "N=" << r.N;
    if (r.N == 3) continue;
    EXPECT_GT(r.deviation_low, 0.0);
    EXPECT_GT(r.deviation_high, 0.0);
    EXPECT_DOUBLE_EQ(r.measured_ratio, r.deviation_low / r.deviation_high);
    if (!r.zero_mode) {
      EXPECT_DOUBLE_EQ(r.expected_ratio, 0.4);
    }
  }
  EXPECT_THROW((void)protection_report(5.0, 2.0, {4}), DomainError);
}

TEST(SweepCsv, HeaderAndRows) {
  const auto spec = exact_spec(Coupling::kJ, {-1.1, -1.0}, {4});
  const auto recs = sweep(spec);
  std::ostringstream out;
  write_sweep_csv(out, spec, recs);
  std::istringstream in(out.str());
  std::string meta, header, row;
  std::getline(in, meta);
  std::getline(in, header);
  EXPECT_EQ(nlohmann::json::parse(meta.substr(2))["coupling"], "j");
  EXPECT_EQ(header, "N,coupling,value,wtilde,wtilde_susy,deviation,stderr,first_order_prediction");
  std::getline(in, row);
  EXPECT_EQ(row.rfind("4,j,-1.1,", 0), 0U) << row;
}

// Sampled sweeps land within a few standard errors of the exact sweep.
TEST(Sweep, SampledAgreesWithExact) {
  for (auto [sampled, exact] : {std::pair{Estimator::kSampledGca, Estimator::kExactGca},
                                std::pair{Estimator::kSampledQgca, Estimator::kExactQgca}}) {
    auto spec = exact_spec(Coupling::kDelta, {0.7, 1.0, 1.3}, {4, 5});
    spec.estimator = exact;
    const auto ref = sweep(spec);
    spec.estimator = sampled;
    spec.runs = 20000;
    spec.iterations = 300;
    spec.base_seed = 11;
    const auto mc = sweep(spec);
    ASSERT_EQ(mc.size(), ref.size());
    for (std::size_t i = 0; i < mc.size(); ++i) {
      EXPECT_GT(mc[i].std_error, 0.0);
      EXPECT_LE(std::abs(mc[i].wtilde - ref[i].wtilde), 4 * mc[i].std_error)
          << to_string(sampled) << " N=" << mc[i].N << " value=" << mc[i].value;
    }
  }
}
