// susyxxz command-line interface: spectra, Witten index estimators, Metropolis
// traces, coupling sweeps and spectrum-cache maintenance.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "susyxxz/susyxxz.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace susyxxz;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Options {
  // shared
  std::string cache_dir;
  unsigned threads = 0;
  ModelParams params = ModelParams::susy_point();
  std::string format = "table";
  std::string out;
  std::uint64_t seed = 0;

  // spectrum / witten
  int N = 4;
  std::string which = "gca";
  double beta = 5.0;
  double beta0 = 1.0;
  std::string qgca_normalization = "legitimate-pool";

  // dynamics / sweep
  std::vector<int> N_list = {3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::string protocol = "gca";
  int runs = 50000;
  int iterations = 500;
  std::string coupling = "delta";
  std::vector<double> values;
  int points = 21;
  std::string estimator = "exact-gca";
  double fit_offset = 0.05;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

QgcaNormalization parse_normalization(const std::string& s) {
  return s == "per-chain" ? QgcaNormalization::kPerChain : QgcaNormalization::kLegitimatePool;
}

Coupling parse_coupling(const std::string& s) { return s == "j" ? Coupling::kJ : Coupling::kDelta; }

Estimator parse_estimator(const std::string& s) {
  if (s == "exact-qgca") return Estimator::kExactQgca;
  if (s == "sampled-gca") return Estimator::kSampledGca;
  if (s == "sampled-qgca") return Estimator::kSampledQgca;
  return Estimator::kExactGca;
}

std::unique_ptr<SpectrumCache> open_cache(const Options& o) {
  if (o.cache_dir.empty()) return nullptr;
  return std::make_unique<SpectrumCache>(o.cache_dir);
}

ordered_json params_json(const ModelParams& p) { return {{"J", p.J}, {"Delta", p.Delta}, {"h", p.h}}; }

void ensure_parent(const fs::path& file) {
  std::error_code ec;
  if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + file.parent_path().string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw IoError("write to " + path.string() + " failed");
}

std::string quoted(const std::string& s) { return ordered_json(s).dump(); }

template <class T>
std::string toml_list(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += shortest_decimal(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out + "]";
}

/// Every flag the command read, as a config file accepted by --config.
std::string resolved_config(const std::string& command, const Options& o) {
  std::ostringstream c;
  c << "# susyxxz " << kVersion << " resolved configuration\n";
  c << "cache-dir = " << quoted(o.cache_dir) << "\n";
  c << "threads = " << o.threads << "\n\n";
  c << "[" << command << "]\n";
  auto kv = [&](const char* key, const std::string& value) { c << key << " = " << value << "\n"; };
  auto num = [](double v) { return shortest_decimal(v); };
  auto params = [&] {
    kv("J", num(o.params.J));
    kv("Delta", num(o.params.Delta));
    kv("h", num(o.params.h));
  };
  if (command == "spectrum") {
    kv("N", std::to_string(o.N));
    params();
    kv("format", quoted(o.format));
  } else if (command == "witten") {
    kv("N", std::to_string(o.N));
    kv("which", quoted(o.which));
    kv("beta", num(o.beta));
    kv("beta0", num(o.beta0));
    kv("qgca-normalization", quoted(o.qgca_normalization));
    params();
    kv("format", quoted(o.format));
  } else if (command == "dynamics") {
    kv("protocol", quoted(o.protocol));
    kv("N", toml_list(o.N_list));
    kv("beta", num(o.beta));
    kv("runs", std::to_string(o.runs));
    kv("iterations", std::to_string(o.iterations));
    kv("seed", std::to_string(o.seed));
    kv("qgca-normalization", quoted(o.qgca_normalization));
    params();
  } else if (command == "sweep") {
    kv("coupling", quoted(o.coupling));
    if (!o.values.empty()) kv("values", toml_list(o.values));
    kv("points", std::to_string(o.points));
    kv("N", toml_list(o.N_list));
    kv("beta", num(o.beta));
    kv("estimator", quoted(o.estimator));
    kv("runs", std::to_string(o.runs));
    kv("iterations", std::to_string(o.iterations));
    kv("seed", std::to_string(o.seed));
    kv("qgca-normalization", quoted(o.qgca_normalization));
    kv("fit-offset", num(o.fit_offset));
  }
  if (!o.out.empty()) kv("out", quoted(o.out));
  return c.str();
}

/// Run bookkeeping: a manifest plus the resolved config that reproduces the run.
class Manifest {
 public:
  Manifest(std::string command, const Options& o) : command_(std::move(command)), opts_(o), started_(utc_now()) {}

  void add_output(const fs::path& p) { outputs_.push_back(p.string()); }

  void write(const fs::path& manifest_path, const fs::path& config_path, ordered_json parameters) {
    write_file(config_path, resolved_config(command_, opts_));
    ordered_json m;
    m["command"] = command_;
    m["parameters"] = std::move(parameters);
    m["base_seed"] = opts_.seed;
    m["code_version"] = kVersion;
    m["started_at"] = started_;
    m["finished_at"] = utc_now();
    m["outputs"] = outputs_;
    m["cache_dir"] = opts_.cache_dir.empty() ? ordered_json(nullptr) : ordered_json(opts_.cache_dir);
    m["threads"] = opts_.threads;
    m["config"] = config_path.string();
    m["rerun"] = "susyxxz --config " + config_path.string() + " " + command_;
    write_file(manifest_path, m.dump(2) + "\n");
  }

 private:
  std::string command_;
  const Options& opts_;
  std::string started_;
  std::vector<std::string> outputs_;
};

/// Writes `text` to --out (plus manifest) or to stdout.
void emit(const std::string& text, const std::string& command, const Options& o,
          ordered_json parameters) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  Manifest manifest(command, o);
  const fs::path out(o.out);
  write_file(out, text);
  manifest.add_output(out);
  manifest.write(fs::path(o.out + ".manifest.json"), fs::path(o.out + ".config.toml"), std::move(parameters));
}

// ---------------------------------------------------------------- spectrum

std::string render_spectrum(const SusySpectrum& s, const std::string& format) {
  std::ostringstream out;
  auto pair_text = [](const SusyLevel& l) { return l.pair_id ? std::to_string(*l.pair_id) : std::string{}; };
  auto is_zero = [](const SusyLevel& l) { return std::abs(l.energy) < kZeroModeTolerance; };
  ordered_json summary;
  summary["N"] = s.N;
  summary["params"] = params_json(s.params);
  summary["levels"] = s.levels.size();
  summary["zero_mode_count"] = s.zero_mode_count;
  summary["zero_mode_length"] = s.zero_mode_length ? ordered_json(*s.zero_mode_length) : ordered_json(nullptr);
  summary["pair_count"] = s.pair_count;

  if (format == "json") {
    ordered_json j = summary;
    j["code_version"] = kVersion;
    j["levels"] = ordered_json::array();
    for (const auto& l : s.levels) {
      j["levels"].push_back({{"L", l.key.L},
                             {"n_d", l.key.n_d},
                             {"energy", l.energy},
                             {"parity", l.parity},
                             {"pair_id", l.pair_id ? ordered_json(*l.pair_id) : ordered_json(nullptr)},
                             {"zero_mode", is_zero(l)}});
    }
    out << j.dump(2) << '\n';
  } else if (format == "csv") {
    summary["code_version"] = kVersion;
    out << "# " << summary.dump() << '\n';
    out << "L,n_d,energy,parity,pair_id,zero_mode\n";
    for (const auto& l : s.levels) {
      out << l.key.L << ',' << l.key.n_d << ',' << shortest_decimal(l.energy) << ',' << l.parity << ','
          << pair_text(l) << ',' << (is_zero(l) ? 1 : 0) << '\n';
    }
  } else {
    out << "N = " << s.N << "  (J, Delta, h) = (" << shortest_decimal(s.params.J) << ", "
        << shortest_decimal(s.params.Delta) << ", " << shortest_decimal(s.params.h) << ")\n";
    out << "levels " << s.levels.size() << ", zero modes " << s.zero_mode_count;
    if (s.zero_mode_length) out << " (L = " << *s.zero_mode_length << ")";
    out << ", pairs " << s.pair_count << "\n\n";
    out << std::setw(4) << "L" << std::setw(5) << "n_d" << std::setw(24) << "E" << std::setw(8) << "parity"
        << std::setw(6) << "pair" << "\n";
    for (const auto& l : s.levels) {
      out << std::setw(4) << l.key.L << std::setw(5) << l.key.n_d << std::setw(24) << shortest_decimal(l.energy)
          << std::setw(8) << l.parity << std::setw(6) << pair_text(l) << (is_zero(l) ? "  *" : "") << '\n';
    }
  }
  return out.str();
}

void cmd_spectrum(const Options& o) {
  const auto cache = open_cache(o);
  const SusySpectrum s = assemble(o.N, o.params, cache.get());
  ordered_json p{{"N", o.N}, {"params", params_json(o.params)}, {"format", o.format}};
  emit(render_spectrum(s, o.format), "spectrum", o, std::move(p));
}

// ---------------------------------------------------------------- witten

void cmd_witten(const Options& o) {
  const auto cache = open_cache(o);
  double value = 0.0;
  ordered_json r;
  r["N"] = o.N;
  r["which"] = o.which;
  r["params"] = params_json(o.params);
  if (o.which == "regularized") {
    value = witten_regularized(assemble(o.N, o.params, cache.get()), o.beta0);
    r["beta0"] = o.beta0;
  } else if (o.which == "gca") {
    value = wtilde_gca_exact(assemble(o.N, o.params, cache.get()), o.beta);
    r["beta"] = o.beta;
  } else {
    const auto norm = parse_normalization(o.qgca_normalization);
    value = wtilde_qgca_exact(o.N, o.params, o.beta, norm, cache.get());
    r["beta"] = o.beta;
    r["qgca_normalization"] = to_string(norm);
  }
  r["value"] = value;

  std::ostringstream out;
  if (o.format == "json") {
    r["code_version"] = kVersion;
    out << r.dump(2) << '\n';
  } else if (o.format == "csv") {
    out << "N,which,beta,value\n"
        << o.N << ',' << o.which << ',' << shortest_decimal(o.which == "regularized" ? o.beta0 : o.beta) << ','
        << shortest_decimal(value) << '\n';
  } else {
    out << (o.which == "regularized" ? "W" : "W~") << "(N=" << o.N << ", " << o.which << ", "
        << (o.which == "regularized" ? "beta0=" + shortest_decimal(o.beta0) : "beta=" + shortest_decimal(o.beta))
        << ") = " << std::setprecision(10) << value << '\n';
  }
  emit(out.str(), "witten", o, r);
}

// ---------------------------------------------------------------- dynamics

void cmd_dynamics(const Options& o) {
  const auto cache = open_cache(o);
  Manifest manifest("dynamics", o);
  const fs::path dir(o.out.empty() ? "results" : o.out);
  const Protocol protocol = o.protocol == "qgca" ? Protocol::kQgca : Protocol::kGca;

  ordered_json summary;
  summary["protocol"] = to_string(protocol);
  summary["beta"] = o.beta;
  summary["runs"] = o.runs;
  summary["iterations"] = o.iterations;
  summary["base_seed"] = o.seed;
  summary["params"] = params_json(o.params);
  summary["code_version"] = kVersion;
  summary["traces"] = ordered_json::array();
  for (int N : o.N_list) {
    ProtocolConfig cfg;
    cfg.protocol = protocol;
    cfg.N = N;
    cfg.beta = o.beta;
    cfg.iterations = o.iterations;
    cfg.runs = o.runs;
    cfg.base_seed = o.seed;
    cfg.params = o.params;
    cfg.qgca_normalization = parse_normalization(o.qgca_normalization);
    cfg.threads = o.threads;
    const WittenTrace trace = run_protocol(cfg, cache.get());
    const double exact = exact_reference(cfg, cache.get());

    std::ostringstream csv;
    write_trace_csv(csv, trace);
    const fs::path file = dir / ("trace_" + o.protocol + "_N" + std::to_string(N) + ".csv");
    write_file(file, csv.str());
    manifest.add_output(file);

    auto opt = [](double v) { return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v); };
    summary["traces"].push_back({{"N", N},
                                 {"file", file.filename().string()},
                                 {"steady_estimate", opt(trace.steady.estimate)},
                                 {"steady_stderr", opt(trace.steady.std_error)},
                                 {"exact", exact}});
    std::cerr << to_string(protocol) << " N=" << N << " steady " << trace.steady.estimate << " +- "
              << trace.steady.std_error << " exact " << exact << '\n';
  }
  const fs::path summary_file = dir / ("summary_" + o.protocol + ".json");
  write_file(summary_file, summary.dump(2) + "\n");
  manifest.add_output(summary_file);

  ordered_json p{{"protocol", o.protocol}, {"N", o.N_list},         {"beta", o.beta},
                 {"runs", o.runs},         {"iterations", o.iterations}, {"params", params_json(o.params)}};
  if (protocol == Protocol::kQgca) p["qgca_normalization"] = o.qgca_normalization;
  manifest.write(dir / ("manifest_dynamics_" + o.protocol + ".json"), dir / ("config_dynamics_" + o.protocol + ".toml"),
                 std::move(p));
}

// ---------------------------------------------------------------- sweep

void cmd_sweep(const Options& o) {
  const auto cache = open_cache(o);
  Manifest manifest("sweep", o);
  const fs::path dir(o.out.empty() ? "results" : o.out);

  SweepSpec spec;
  spec.coupling = parse_coupling(o.coupling);
  spec.values = o.values.empty() ? default_grid(spec.coupling, o.points) : o.values;
  spec.N_list = o.N_list;
  spec.beta = o.beta;
  spec.estimator = parse_estimator(o.estimator);
  spec.runs = o.runs;
  spec.iterations = o.iterations;
  spec.base_seed = o.seed;
  spec.qgca_normalization = parse_normalization(o.qgca_normalization);
  spec.threads = o.threads;

  const auto records = sweep(spec, cache.get());
  const std::string stem = o.coupling + "_" + o.estimator;
  std::ostringstream csv;
  write_sweep_csv(csv, spec, records);
  const fs::path sweep_file = dir / ("sweep_" + stem + ".csv");
  write_file(sweep_file, csv.str());
  manifest.add_output(sweep_file);

  ordered_json fit;
  fit["sweep"] = sweep_metadata(spec);
  fit["slopes"] = ordered_json::array();
  std::vector<int> Ns = spec.N_list;
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  for (int N : Ns) {
    const SlopeEstimate s = slope_cN(N, spec.beta, spec.coupling, ModelParams::susy_point(), cache.get());
    double max_dev = 0.0;
    for (const auto& r : records) {
      if (r.N == N) max_dev = std::max(max_dev, r.deviation);
    }
    fit["slopes"].push_back({{"N", N},
                             {"zero_mode", s.zero_mode},
                             {"E1", s.E1},
                             {"derivative_hf", s.derivative_hf},
                             {"derivative_fd", s.derivative_fd},
                             {"c_N", s.c_N},
                             {"max_deviation", max_dev}});
  }
  try {
    fit["first_order_fit"] = to_json(compare_first_order(records, o.fit_offset));
  } catch (const FitError& e) {
    fit["first_order_fit"] = {{"error", e.what()}};
  }
  const fs::path fit_file = dir / ("fit_" + stem + ".json");
  write_file(fit_file, fit.dump(2) + "\n");
  manifest.add_output(fit_file);

  ordered_json p{{"coupling", o.coupling}, {"values", spec.values}, {"N", o.N_list},
                 {"beta", o.beta},         {"estimator", o.estimator}};
  if (is_sampled(spec.estimator)) {
    p["runs"] = o.runs;
    p["iterations"] = o.iterations;
  }
  manifest.write(dir / ("manifest_sweep_" + stem + ".json"), dir / ("config_sweep_" + stem + ".toml"), std::move(p));
}

// ---------------------------------------------------------------- cache

void cmd_cache_inspect(const Options& o) {
  const SpectrumCache cache(o.cache_dir);
  const auto entries = cache.entries();
  std::uintmax_t bytes = 0;
  std::size_t invalid = 0;
  if (o.format == "json") {
    ordered_json j;
    j["directory"] = cache.directory().string();
    j["entries"] = ordered_json::array();
    for (const auto& e : entries) {
      j["entries"].push_back({{"file", e.path.filename().string()}, {"bytes", e.bytes}, {"valid", e.valid}});
    }
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << cache.directory().string() << '\n';
  for (const auto& e : entries) {
    bytes += e.bytes;
    invalid += e.valid ? 0 : 1;
    std::cout << "  " << e.path.filename().string() << "  " << e.bytes << (e.valid ? "" : "  INVALID") << '\n';
  }
  std::cout << entries.size() << " entries, " << bytes << " bytes, " << invalid << " invalid\n";
}

void cmd_cache_clear(const Options& o) {
  const SpectrumCache cache(o.cache_dir);
  const auto n = cache.clear();
  std::cout << "removed " << n << " files from " << cache.directory().string() << '\n';
}

void add_params(CLI::App* sub, Options& o) {
  sub->add_option("--J", o.params.J, "XY coupling")->capture_default_str();
  sub->add_option("--Delta", o.params.Delta, "Ising anisotropy")->capture_default_str();
  sub->add_option("--h", o.params.h, "Boundary field")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Supersymmetric XXZ chain: spectra, Witten index estimators and Metropolis protocols", "susyxxz"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h is not free: --h is the boundary field
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Config file (key = value per flag, one [section] per command)");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--cache-dir", o.cache_dir, "Spectrum cache root (disabled when empty)");
  app.add_option("--threads", o.threads, "Worker threads, 0 = machine parallelism")->capture_default_str();

  const auto formats = CLI::IsMember({"table", "json", "csv"});
  const auto norms = CLI::IsMember({"legitimate-pool", "per-chain"});
  const auto positive = CLI::PositiveNumber;
  const auto n_range = CLI::Range(3, kMaxChainLength + 1);

  auto* spectrum = app.add_subcommand("spectrum", "List the N-sector levels with parity and SUSY pairing");
  spectrum->add_option("--N", o.N, "Particle-number sector")->required()->check(n_range);
  add_params(spectrum, o);
  spectrum->add_option("--format", o.format, "Output format")->check(formats)->capture_default_str();
  spectrum->add_option("--out", o.out, "Output file (stdout when omitted)");

  auto* witten = app.add_subcommand("witten", "Exact Witten index estimators");
  witten->add_option("--N", o.N, "Particle-number sector")->required()->check(n_range);
  witten->add_option("--which", o.which, "regularized, gca or qgca")
      ->check(CLI::IsMember({"regularized", "gca", "qgca"}))
      ->capture_default_str();
  witten->add_option("--beta", o.beta, "Inverse temperature")->check(CLI::NonNegativeNumber)->capture_default_str();
  witten->add_option("--beta0", o.beta0, "Regulator for the regularized index")->check(positive)->capture_default_str();
  witten->add_option("--qgca-normalization", o.qgca_normalization)->check(norms)->capture_default_str();
  add_params(witten, o);
  witten->add_option("--format", o.format, "Output format")->check(formats)->capture_default_str();
  witten->add_option("--out", o.out, "Output file (stdout when omitted)");

  auto* dynamics = app.add_subcommand("dynamics", "Metropolis GCA/QGCA traces, one CSV per N");
  dynamics->add_option("--protocol", o.protocol)->check(CLI::IsMember({"gca", "qgca"}))->capture_default_str();
  dynamics->add_option("--N", o.N_list, "Comma-separated sectors")->delimiter(',')->check(n_range)->capture_default_str();
  dynamics->add_option("--beta", o.beta)->check(CLI::NonNegativeNumber)->capture_default_str();
  dynamics->add_option("--runs", o.runs)->check(positive)->capture_default_str();
  dynamics->add_option("--iterations", o.iterations)->check(positive)->capture_default_str();
  dynamics->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  dynamics->add_option("--qgca-normalization", o.qgca_normalization)->check(norms)->capture_default_str();
  add_params(dynamics, o);
  dynamics->add_option("--out", o.out, "Output directory (default: results)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Coupling sweep across the SUSY point with first-order fits");
  sweep_cmd->add_option("--coupling", o.coupling)->check(CLI::IsMember({"delta", "j"}))->capture_default_str();
  sweep_cmd->add_option("--values", o.values, "Comma-separated coupling values")->delimiter(',');
  sweep_cmd->add_option("--points", o.points, "Grid points over c0 +- 0.5 when --values is absent")
      ->check(CLI::Range(2, 100001))
      ->capture_default_str();
  sweep_cmd->add_option("--N", o.N_list, "Comma-separated sectors")->delimiter(',')->check(n_range)->capture_default_str();
  sweep_cmd->add_option("--beta", o.beta)->check(positive)->capture_default_str();
  sweep_cmd->add_option("--estimator", o.estimator)
      ->check(CLI::IsMember({"exact-gca", "exact-qgca", "sampled-gca", "sampled-qgca"}))
      ->capture_default_str();
  sweep_cmd->add_option("--runs", o.runs)->check(positive)->capture_default_str();
  sweep_cmd->add_option("--iterations", o.iterations)->check(positive)->capture_default_str();
  sweep_cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--qgca-normalization", o.qgca_normalization)->check(norms)->capture_default_str();
  sweep_cmd->add_option("--fit-offset", o.fit_offset, "Largest |dc| used by the first-order fit")
      ->check(positive)
      ->capture_default_str();
  sweep_cmd->add_option("--out", o.out, "Output directory (default: results)");

  auto* cache = app.add_subcommand("cache", "Inspect or clear the spectrum cache");
  cache->require_subcommand(1);
  auto* inspect = cache->add_subcommand("inspect", "List cache entries");
  inspect->add_option("--format", o.format)->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  auto* clear = cache->add_subcommand("clear", "Remove every entry of the current format version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (spectrum->parsed()) {
      cmd_spectrum(o);
    } else if (witten->parsed()) {
      cmd_witten(o);
    } else if (dynamics->parsed()) {
      cmd_dynamics(o);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(o);
    } else if (cache->parsed()) {
      if (o.cache_dir.empty()) throw ConfigError("cache commands need --cache-dir");
      if (inspect->parsed()) cmd_cache_inspect(o);
      if (clear->parsed()) cmd_cache_clear(o);
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    // SolverError, ConsistencyError, FitError
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
