/**
 * @file dynamics.hpp
 * @brief Metropolis collisional-model sampler for the normalized Witten index.
 *
 * Every Monte Carlo run is one pure eigenstate that is repeatedly offered a
 * jump to a uniformly drawn eigenstate and accepts it with probability
 * min(1, exp(-beta dE)). Two averaging protocols:
 *
 *  GCA   one walker per run over the union of all eigenstates of all chains
 *        with L_min(N) <= L <= L_max(N). A run is legitimate at an iteration
 *        when its state lies in the N-sector; the estimate averages the
 *        parity over legitimate runs.
 *
 *  QGCA  one walker per run and per member length L, confined to the 2^L
 *        eigenstates of that chain. A walker is legitimate when its n_d is
 *        N - L - 1. Contributions are combined per QgcaNormalization.
 *
 * Parities are integers, so per-iteration tallies are exact integer sums and
 * the reduction over worker threads does not depend on scheduling.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "susyxxz/format.hpp"
#include "susyxxz/susy.hpp"
#include "susyxxz/version.hpp"

namespace susyxxz {

enum class Protocol { kGca, kQgca };

[[nodiscard]] inline std::string to_string(Protocol p) { return p == Protocol::kGca ? "GCA" : "QGCA"; }

struct ProtocolConfig {
  Protocol protocol = Protocol::kGca;
  int N = 3;
  double beta = 5.0;
  int iterations = 500;
  int runs = 50000;
  std::uint64_t base_seed = 0;
  ModelParams params = ModelParams::susy_point();
  QgcaNormalization qgca_normalization = QgcaNormalization::kLegitimatePool;
  /// Trailing fraction of iterations summarised as the steady state.
  double window_fraction = 0.2;
  /// Worker threads; 0 means hardware concurrency. Does not affect results.
  unsigned threads = 0;
};

inline void validate(const ProtocolConfig& c) {
  if (c.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (c.runs < 1) throw ConfigError("runs must be >= 1");
  if (!(c.beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (!(c.window_fraction > 0.0 && c.window_fraction <= 1.0)) throw ConfigError("window fraction must be in (0, 1]");
  if (c.N < 3) throw ConfigError("N must be >= 3");
}

/// Accept iff u < min(1, exp(-beta dE)).
[[nodiscard]] inline bool metropolis_accept(double delta_energy, double beta, double u) noexcept {
  if (delta_energy <= 0.0) return u < 1.0;
  return u < std::exp(-beta * delta_energy);
}

namespace detail {

inline std::seed_seq make_seed_seq(std::uint64_t base_seed, std::string_view tag, int N, std::uint64_t index) {
  std::vector<std::uint32_t> words = {
      static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
      static_cast<std::uint32_t>(N),         static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32), static_cast<std::uint32_t>(tag.size())};
  for (char ch : tag) words.push_back(static_cast<unsigned char>(ch));
  return std::seed_seq(words.begin(), words.end());
}

}  // namespace detail

/// Independent reproducible generator for one (tag, N, run) triple.
[[nodiscard]] inline std::mt19937_64 seed_stream(std::uint64_t base_seed, std::string_view tag, int N,
                                                 std::uint64_t run_index) {
  auto seq = detail::make_seed_seq(base_seed, tag, N, run_index);
  return std::mt19937_64(seq);
}

/// A fresh 64-bit base seed for a derived task (sweep points, references).
[[nodiscard]] inline std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view tag, int N,
                                               std::uint64_t index) {
  auto seq = detail::make_seed_seq(base_seed, tag, N, index);
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

/// Eigenstates a walker may occupy.
struct StatePool {
  int L = 0;  // chain length for QGCA pools, 0 for the pooled GCA window
  std::vector<double> energy;
  std::vector<std::int8_t> parity;
  std::vector<std::uint8_t> legitimate;

  [[nodiscard]] std::size_t size() const noexcept { return energy.size(); }

  void append(const FullChainSpectrum& chain, int legitimate_n_d) {
    for (const auto& b : chain.blocks) {
      for (Eigen::Index k = 0; k < b.size(); ++k) {
        energy.push_back(b.energies[k]);
        parity.push_back(static_cast<std::int8_t>(b.key.parity()));
        legitimate.push_back(b.key.n_d == legitimate_n_d ? 1 : 0);
      }
    }
  }
};

[[nodiscard]] inline StatePool gca_pool(int N, const ModelParams& params, const SpectrumCache* cache = nullptr) {
  StatePool pool;
  for (const SectorKey& key : decompose_n_sector(N).members) {
    pool.append(full_chain_spectrum(key.L, params, cache), key.n_d);
  }
  if (pool.size() == 0) throw ConfigError("empty GCA state pool");
  return pool;
}

[[nodiscard]] inline std::vector<StatePool> qgca_pools(int N, const ModelParams& params,
                                                       const SpectrumCache* cache = nullptr) {
  std::vector<StatePool> pools;
  for (const SectorKey& key : decompose_n_sector(N).members) {
    StatePool pool;
    pool.L = key.L;
    pool.append(full_chain_spectrum(key.L, params, cache), key.n_d);
    pools.push_back(std::move(pool));
  }
  if (pools.empty()) throw ConfigError("empty QGCA ensemble");
  return pools;
}

struct SteadyState {
  int window_begin = 0;  // first iteration (1-based) in the window
  int window_size = 0;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::int64_t legitimate_samples = 0;
};

/// Per-iteration estimates; NaN marks an undefined value (no legitimate
/// sample, or too few for a standard error).
struct WittenTrace {
  ProtocolConfig config;
  std::vector<double> estimate;
  std::vector<double> std_error;
  std::vector<std::int64_t> legitimate_count;
  SteadyState steady;
  /// Per pool and pooled state: run-iterations spent there over the whole
  /// trace, and runs sitting there after the last iteration.
  std::vector<std::vector<std::int64_t>> occupancy;
  std::vector<std::vector<std::int64_t>> final_occupancy;
};

namespace detail {

/// Integer tallies for one iteration of one pool.
struct Tally {
  std::int64_t parity_sum = 0;
  std::int64_t legit = 0;
};

struct SimulationResult {
  std::vector<std::vector<Tally>> tallies;  // [pool][iteration]
  std::vector<std::vector<std::int64_t>> occupancy;        // [pool][state]
  std::vector<std::vector<std::int64_t>> final_occupancy;  // [pool][state]
  std::vector<std::int64_t> window_parity;  // [run]
  std::vector<std::int64_t> window_legit;   // [run]
};

inline SimulationResult simulate(const std::vector<StatePool>& pools, const ProtocolConfig& cfg, int window_begin) {
  const auto runs = static_cast<std::size_t>(cfg.runs);
  const auto iterations = static_cast<std::size_t>(cfg.iterations);
  const std::string tag = to_string(cfg.protocol);

  unsigned threads = cfg.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));

  SimulationResult result;
  result.window_parity.assign(runs, 0);
  result.window_legit.assign(runs, 0);
  std::vector<std::vector<std::vector<Tally>>> partial(
      threads, std::vector<std::vector<Tally>>(pools.size(), std::vector<Tally>(iterations)));
  auto empty_counts = [&] {
    std::vector<std::vector<std::int64_t>> c;
    for (const auto& p : pools) c.emplace_back(p.size(), 0);
    return c;
  };
  std::vector<std::vector<std::vector<std::int64_t>>> occupancy(threads, empty_counts());
  std::vector<std::vector<std::vector<std::int64_t>>> final_occupancy(threads, empty_counts());

  auto worker = [&](unsigned t) {
    const std::size_t first = runs * t / threads;
    const std::size_t last = runs * (t + 1) / threads;
    auto& tallies = partial[t];
    std::vector<std::size_t> state(pools.size());
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t run = first; run < last; ++run) {
      auto rng = seed_stream(cfg.base_seed, tag, cfg.N, run);
      for (std::size_t g = 0; g < pools.size(); ++g) {
        state[g] = std::uniform_int_distribution<std::size_t>(0, pools[g].size() - 1)(rng);
      }
      std::int64_t wp = 0;
      std::int64_t wl = 0;
      for (std::size_t it = 0; it < iterations; ++it) {
        const bool in_window = static_cast<int>(it) + 1 >= window_begin;
        for (std::size_t g = 0; g < pools.size(); ++g) {
          const StatePool& pool = pools[g];
          const std::size_t proposal = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
          const double u = uniform(rng);
          if (metropolis_accept(pool.energy[proposal] - pool.energy[state[g]], cfg.beta, u)) state[g] = proposal;
          ++occupancy[t][g][state[g]];
          if (pool.legitimate[state[g]] != 0) {
            const int p = pool.parity[state[g]];
            tallies[g][it].parity_sum += p;
            ++tallies[g][it].legit;
            if (in_window) {
              wp += p;
              ++wl;
            }
          }
        }
      }
      result.window_parity[run] = wp;
      result.window_legit[run] = wl;
      for (std::size_t g = 0; g < pools.size(); ++g) ++final_occupancy[t][g][state[g]];
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }

  result.occupancy = empty_counts();
  result.final_occupancy = empty_counts();
  for (unsigned t = 0; t < threads; ++t) {
    for (std::size_t g = 0; g < pools.size(); ++g) {
      for (std::size_t k = 0; k < pools[g].size(); ++k) {
        result.occupancy[g][k] += occupancy[t][g][k];
        result.final_occupancy[g][k] += final_occupancy[t][g][k];
      }
    }
  }
  result.tallies.assign(pools.size(), std::vector<Tally>(iterations));
  for (const auto& part : partial) {
    for (std::size_t g = 0; g < pools.size(); ++g) {
      for (std::size_t it = 0; it < iterations; ++it) {
        result.tallies[g][it].parity_sum += part[g][it].parity_sum;
        result.tallies[g][it].legit += part[g][it].legit;
      }
    }
  }
  return result;
}

/// Mean and standard error of legitimate +-1 samples.
inline void pooled_estimate(std::int64_t parity_sum, std::int64_t n, double& est, double& se) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  est = n > 0 ? static_cast<double>(parity_sum) / static_cast<double>(n) : nan;
  if (n < 2) {
    se = nan;
    return;
  }
  const double dn = static_cast<double>(n);
  const double s = static_cast<double>(parity_sum);
  const double var = std::max(0.0, (dn - s * s / dn) / (dn - 1.0));
  se = std::sqrt(var / dn);
}

inline WittenTrace reduce(const ProtocolConfig& cfg, const SimulationResult& sim, int window_begin) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const auto iterations = static_cast<std::size_t>(cfg.iterations);
  const double runs = static_cast<double>(cfg.runs);
  const bool per_chain = cfg.protocol == Protocol::kQgca && cfg.qgca_normalization == QgcaNormalization::kPerChain;

  WittenTrace trace;
  trace.config = cfg;
  trace.occupancy = sim.occupancy;
  trace.final_occupancy = sim.final_occupancy;
  trace.estimate.resize(iterations);
  trace.std_error.resize(iterations);
  trace.legitimate_count.resize(iterations);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::int64_t s = 0;
    std::int64_t n = 0;
    double mean_sum = 0.0;
    double var_sum = 0.0;
    for (const auto& pool_tallies : sim.tallies) {
      const Tally& t = pool_tallies[it];
      s += t.parity_sum;
      n += t.legit;
      const double ps = static_cast<double>(t.parity_sum);
      mean_sum += ps / runs;
      var_sum += cfg.runs > 1 ? std::max(0.0, (static_cast<double>(t.legit) - ps * ps / runs) / (runs - 1.0)) : nan;
    }
    trace.legitimate_count[it] = n;
    if (per_chain) {
      trace.estimate[it] = mean_sum;
      trace.std_error[it] = std::sqrt(var_sum / runs);
    } else {
      pooled_estimate(s, n, trace.estimate[it], trace.std_error[it]);
    }
  }

  SteadyState& ss = trace.steady;
  ss.window_begin = window_begin;
  ss.window_size = cfg.iterations - window_begin + 1;
  double a_total = 0.0;
  double b_total = 0.0;
  for (std::size_t p = 0; p < sim.window_parity.size(); ++p) {
    a_total += static_cast<double>(sim.window_parity[p]);
    b_total += static_cast<double>(sim.window_legit[p]);
  }
  ss.legitimate_samples = static_cast<std::int64_t>(b_total);
  if (per_chain) {
    const double w = ss.window_size;
    const double mean = a_total / (w * runs);
    double sq = 0.0;
    for (std::int64_t a : sim.window_parity) sq += (a / w - mean) * (a / w - mean);
    ss.estimate = mean;
    ss.std_error = cfg.runs > 1 ? std::sqrt(sq / (runs - 1.0) / runs) : nan;
  } else if (b_total > 0.0) {
    // Ratio estimator over runs; each run's window sums are one sample.
    const double r = a_total / b_total;
    double sq = 0.0;
    for (std::size_t p = 0; p < sim.window_parity.size(); ++p) {
      const double d = static_cast<double>(sim.window_parity[p]) - r * static_cast<double>(sim.window_legit[p]);
      sq += d * d;
    }
    ss.estimate = r;
    ss.std_error = cfg.runs > 1 ? std::sqrt(sq * runs / (runs - 1.0)) / b_total : nan;
  }
  return trace;
}

inline int window_begin_for(const ProtocolConfig& cfg) {
  const int size = std::max(1, static_cast<int>(std::lround(cfg.iterations * cfg.window_fraction)));
  return cfg.iterations - std::min(size, cfg.iterations) + 1;
}

}  // namespace detail

[[nodiscard]] inline WittenTrace run_gca(ProtocolConfig cfg, const SpectrumCache* cache = nullptr) {
  cfg.protocol = Protocol::kGca;
  validate(cfg);
  const std::vector<StatePool> pools{gca_pool(cfg.N, cfg.params, cache)};
  const int wb = detail::window_begin_for(cfg);
  return detail::reduce(cfg, detail::simulate(pools, cfg, wb), wb);
}

[[nodiscard]] inline WittenTrace run_qgca(ProtocolConfig cfg, const SpectrumCache* cache = nullptr) {
  cfg.protocol = Protocol::kQgca;
  validate(cfg);
  const auto pools = qgca_pools(cfg.N, cfg.params, cache);
  const int wb = detail::window_begin_for(cfg);
  return detail::reduce(cfg, detail::simulate(pools, cfg, wb), wb);
}

[[nodiscard]] inline WittenTrace run_protocol(const ProtocolConfig& cfg, const SpectrumCache* cache = nullptr) {
  return cfg.protocol == Protocol::kGca ? run_gca(cfg, cache) : run_qgca(cfg, cache);
}

/// The exact value the protocol's steady state converges to.
[[nodiscard]] inline double exact_reference(const ProtocolConfig& cfg, const SpectrumCache* cache = nullptr) {
  if (cfg.protocol == Protocol::kGca) return wtilde_gca_exact(assemble(cfg.N, cfg.params, cache), cfg.beta);
  return wtilde_qgca_exact(cfg.N, cfg.params, cfg.beta, cfg.qgca_normalization, cache);
}

[[nodiscard]] inline nlohmann::ordered_json trace_metadata(const WittenTrace& trace) {
  const ProtocolConfig& c = trace.config;
  nlohmann::ordered_json meta;
  meta["protocol"] = to_string(c.protocol);
  meta["N"] = c.N;
  meta["beta"] = c.beta;
  meta["params"] = {{"J", c.params.J}, {"Delta", c.params.Delta}, {"h", c.params.h}};
  meta["base_seed"] = c.base_seed;
  meta["seed_tag"] = to_string(c.protocol);
  meta["runs"] = c.runs;
  meta["iterations"] = c.iterations;
  if (c.protocol == Protocol::kQgca) meta["qgca_normalization"] = to_string(c.qgca_normalization);
  auto opt = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
  meta["steady_state"] = {{"window_begin", trace.steady.window_begin},
                          {"window_size", trace.steady.window_size},
                          {"estimate", opt(trace.steady.estimate)},
                          {"stderr", opt(trace.steady.std_error)},
                          {"legitimate_samples", trace.steady.legitimate_samples}};
  meta["code_version"] = kVersion;
  return meta;
}

/// CSV with a one-line `# {json}` metadata header. Undefined values are empty cells.
inline void write_trace_csv(std::ostream& out, const WittenTrace& trace) {
  out << "# " << trace_metadata(trace).dump() << '\n';
  out << "iteration,estimate,stderr,legitimate_count\n";
  for (std::size_t i = 0; i < trace.estimate.size(); ++i) {
    out << (i + 1) << ',' << csv_cell(trace.estimate[i]) << ',' << csv_cell(trace.std_error[i]) << ','
        << trace.legitimate_count[i] << '\n';
  }
}

}  // namespace susyxxz
