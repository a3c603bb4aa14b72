/**
 * @file analysis.hpp
 * @brief Coupling sweeps across the supersymmetric point and first-order fits.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "susyxxz/dynamics.hpp"

namespace susyxxz {

enum class Estimator { kExactGca, kExactQgca, kSampledGca, kSampledQgca };

[[nodiscard]] inline std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::kExactGca: return "exact-gca";
    case Estimator::kExactQgca: return "exact-qgca";
    case Estimator::kSampledGca: return "sampled-gca";
    case Estimator::kSampledQgca: return "sampled-qgca";
  }
  return "?";
}

[[nodiscard]] constexpr bool is_sampled(Estimator e) noexcept {
  return e == Estimator::kSampledGca || e == Estimator::kSampledQgca;
}

/// `points` evenly spaced values over [c0 - 0.5, c0 + 0.5] around the SUSY value.
[[nodiscard]] inline std::vector<double> default_grid(Coupling c, int points = 21) {
  if (points < 2) throw ConfigError("a sweep grid needs at least two points");
  const double lo = susy_value(c) - 0.5;
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(lo + static_cast<double>(i) / (points - 1));
  return v;
}

struct SweepSpec {
  Coupling coupling = Coupling::kDelta;
  std::vector<double> values = default_grid(Coupling::kDelta);
  std::vector<int> N_list = {3, 4, 5, 6, 7, 8, 9, 10, 11};
  double beta = 5.0;
  Estimator estimator = Estimator::kExactGca;
  int runs = 50000;
  int iterations = 500;
  std::uint64_t base_seed = 0;
  QgcaNormalization qgca_normalization = QgcaNormalization::kLegitimatePool;
  unsigned threads = 0;
};

struct SweepRecord {
  int N = 3;
  Coupling coupling = Coupling::kDelta;
  double value = 0.0;
  double wtilde = 0.0;
  double wtilde_susy = 0.0;
  double deviation = 0.0;
  double std_error = 0.0;  // 0 for exact estimators
  double first_order_prediction = 0.0;
};

namespace detail {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

inline Estimate estimate_at(const SweepSpec& spec, int N, const ModelParams& params, std::uint64_t seed,
                            const SpectrumCache* cache) {
  switch (spec.estimator) {
    case Estimator::kExactGca: return {wtilde_gca_exact(assemble(N, params, cache), spec.beta), 0.0};
    case Estimator::kExactQgca:
      return {wtilde_qgca_exact(N, params, spec.beta, spec.qgca_normalization, cache), 0.0};
    case Estimator::kSampledGca:
    case Estimator::kSampledQgca: {
      ProtocolConfig cfg;
      cfg.protocol = spec.estimator == Estimator::kSampledGca ? Protocol::kGca : Protocol::kQgca;
      cfg.N = N;
      cfg.beta = spec.beta;
      cfg.iterations = spec.iterations;
      cfg.runs = spec.runs;
      cfg.base_seed = seed;
      cfg.params = params;
      cfg.qgca_normalization = spec.qgca_normalization;
      cfg.threads = spec.threads;
      const WittenTrace t = run_protocol(cfg, cache);
      return {t.steady.estimate, t.steady.std_error};
    }
  }
  return {};
}

}  // namespace detail

/// One record per (N, value), ordered by N then value. The reference
/// W_susy is computed once per N with the same estimator; sampled
/// references use their own seed stream.
[[nodiscard]] inline std::vector<SweepRecord> sweep(const SweepSpec& spec, const SpectrumCache* cache = nullptr) {
  if (spec.values.empty()) throw ConfigError("sweep needs at least one coupling value");
  if (spec.N_list.empty()) throw ConfigError("sweep needs at least one N");
  if (!(spec.beta > 0.0)) throw ConfigError("sweep needs beta > 0");

  std::vector<int> Ns = spec.N_list;
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());

  const double c0 = susy_value(spec.coupling);
  const ModelParams susy = ModelParams::susy_point();
  std::vector<SweepRecord> records;
  for (int N : Ns) {
    const SlopeEstimate slope = slope_cN(N, spec.beta, spec.coupling, susy, cache);
    const auto ref = detail::estimate_at(spec, N, susy, derive_seed(spec.base_seed, "sweep-reference", N, 0), cache);
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double v = values[k];
      SweepRecord r;
      r.N = N;
      r.coupling = spec.coupling;
      r.value = v;
      r.wtilde_susy = ref.value;
      r.first_order_prediction = deviation_first_order(slope, v - c0);
      if (v == c0) {
        r.wtilde = ref.value;
        r.std_error = ref.std_error;
      } else {
        const auto est = detail::estimate_at(spec, N, with_coupling(susy, spec.coupling, v),
                                             derive_seed(spec.base_seed, "sweep-point", N, k), cache);
        r.wtilde = est.value;
        r.std_error = std::hypot(est.std_error, ref.std_error);
      }
      r.deviation = std::abs(r.wtilde - r.wtilde_susy);
      records.push_back(r);
    }
  }
  return records;
}

struct FitRow {
  int N = 3;
  int points = 0;
  double fitted_slope = 0.0;
  double predicted_slope = 0.0;
  double relative_discrepancy = 0.0;
  double max_residual = 0.0;
  bool nonlinear = false;
};

struct FitReport {
  double max_abs_offset = 0.05;
  std::vector<FitRow> rows;
};

/// Origin-constrained least squares of deviation against |dc| for
/// 0 < |dc| <= max_abs_offset, one fit per N.
[[nodiscard]] inline FitReport compare_first_order(const std::vector<SweepRecord>& records,
                                                   double max_abs_offset = 0.05) {
  std::map<int, std::vector<const SweepRecord*>> by_n;
  for (const auto& r : records) {
    const double x = std::abs(r.value - susy_value(r.coupling));
    if (x > 0.0 && x <= max_abs_offset + 1e-12) by_n[r.N].push_back(&r);
  }
  for (const auto& r : records) by_n.try_emplace(r.N);

  FitReport report;
  report.max_abs_offset = max_abs_offset;
  for (const auto& [N, pts] : by_n) {
    if (pts.size() < 3) {
      throw FitError("first-order fit for N=" + std::to_string(N) + " has " + std::to_string(pts.size()) +
                     " usable points (need 3)");
    }
    double sxy = 0.0, sxx = 0.0, x_max = 0.0;
    for (const auto* r : pts) {
      const double x = std::abs(r->value - susy_value(r->coupling));
      sxy += x * r->deviation;
      sxx += x * x;
      x_max = std::max(x_max, x);
    }
    FitRow row;
    row.N = N;
    row.points = static_cast<int>(pts.size());
    row.fitted_slope = sxy / sxx;
    const SweepRecord* any = pts.front();
    row.predicted_slope = any->first_order_prediction / std::abs(any->value - susy_value(any->coupling));
    if (row.predicted_slope != 0.0) {
      row.relative_discrepancy = std::abs(row.fitted_slope - row.predicted_slope) / std::abs(row.predicted_slope);
    } else {
      row.relative_discrepancy = row.fitted_slope == 0.0 ? 0.0 : INFINITY;
    }
    for (const auto* r : pts) {
      const double x = std::abs(r->value - susy_value(r->coupling));
      row.max_residual = std::max(row.max_residual, std::abs(r->deviation - row.fitted_slope * x));
    }
    row.nonlinear = row.max_residual > 0.1 * std::abs(row.fitted_slope) * x_max;
    report.rows.push_back(row);
  }
  return report;
}

struct ProtectionRow {
  int N = 3;
  bool zero_mode = false;
  double E1 = 0.0;
  double deviation_low = 0.0;   // at beta_low
  double deviation_high = 0.0;  // at beta_high
  double measured_ratio = 0.0;  // deviation_low / deviation_high
  double expected_ratio = 0.0;
};

struct ProtectionReport {
  double beta_low = 2.0;
  double beta_high = 5.0;
  double offset = 0.3;
  Coupling coupling = Coupling::kDelta;
  std::vector<ProtectionRow> rows;
};

/// Exact-GCA deviation at |dc| = offset (larger of the two sides) at two
/// temperatures, against the first-order expectation for their ratio.
[[nodiscard]] inline ProtectionReport protection_report(double beta_low, double beta_high, const std::vector<int>& N_list,
                                                        double offset = 0.3, Coupling c = Coupling::kDelta,
                                                        const SpectrumCache* cache = nullptr) {
  if (!(beta_low > 0.0 && beta_low < beta_high)) throw DomainError("protection report needs 0 < beta_low < beta_high");
  ProtectionReport rep{beta_low, beta_high, offset, c, {}};
  const ModelParams susy = ModelParams::susy_point();
  const double c0 = susy_value(c);
  for (int N : N_list) {
    const SusySpectrum base = assemble(N, susy, cache);
    const SusySpectrum up = assemble(N, with_coupling(susy, c, c0 + offset), cache);
    const SusySpectrum dn = assemble(N, with_coupling(susy, c, c0 - offset), cache);
    auto deviation = [&](double beta) {
      const double ref = wtilde_gca_exact(base, beta);
      return std::max(std::abs(wtilde_gca_exact(up, beta) - ref), std::abs(wtilde_gca_exact(dn, beta) - ref));
    };
    ProtectionRow row;
    row.N = N;
    row.zero_mode = base.m == 1;
    row.E1 = base.lowest_positive_energy().value_or(0.0);
    row.deviation_low = deviation(beta_low);
    row.deviation_high = deviation(beta_high);
    row.measured_ratio = row.deviation_high > 0.0 ? row.deviation_low / row.deviation_high : INFINITY;
    row.expected_ratio = row.zero_mode ? (beta_low * std::exp(-beta_low * row.E1)) /
                                             (beta_high * std::exp(-beta_high * row.E1))
                                       : beta_low / beta_high;
    rep.rows.push_back(row);
  }
  return rep;
}

[[nodiscard]] inline nlohmann::ordered_json sweep_metadata(const SweepSpec& spec) {
  nlohmann::ordered_json meta;
  meta["coupling"] = to_string(spec.coupling);
  meta["susy_value"] = susy_value(spec.coupling);
  meta["values"] = spec.values;
  meta["N_list"] = spec.N_list;
  meta["beta"] = spec.beta;
  meta["estimator"] = to_string(spec.estimator);
  if (is_sampled(spec.estimator)) {
    meta["runs"] = spec.runs;
    meta["iterations"] = spec.iterations;
    meta["base_seed"] = spec.base_seed;
  }
  if (spec.estimator == Estimator::kExactQgca || spec.estimator == Estimator::kSampledQgca) {
    meta["qgca_normalization"] = to_string(spec.qgca_normalization);
  }
  meta["code_version"] = kVersion;
  return meta;
}

inline void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRecord>& records) {
  out << "# " << sweep_metadata(spec).dump() << '\n';
  out << "N,coupling,value,wtilde,wtilde_susy,deviation,stderr,first_order_prediction\n";
  for (const auto& r : records) {
    out << r.N << ',' << to_string(r.coupling) << ',' << csv_cell(r.value) << ',' << csv_cell(r.wtilde) << ','
        << csv_cell(r.wtilde_susy) << ',' << csv_cell(r.deviation) << ',' << csv_cell(r.std_error) << ','
        << csv_cell(r.first_order_prediction) << '\n';
  }
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const FitReport& report) {
  nlohmann::ordered_json j;
  j["max_abs_offset"] = report.max_abs_offset;
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    j["fits"].push_back({{"N", r.N},
                         {"points", r.points},
                         {"fitted_slope", r.fitted_slope},
                         {"predicted_slope", r.predicted_slope},
                         {"relative_discrepancy", r.relative_discrepancy},
                         {"max_residual", r.max_residual},
                         {"nonlinear", r.nonlinear}});
  }
  return j;
}

}  // namespace susyxxz
