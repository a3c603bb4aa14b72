/**
 * @file spectrum_cache.hpp
 * @brief On-disk cache of sector spectra.
 *
 * Layout: <root>/v<version>/L{L}_nd{nd}_J{J}_D{Delta}_h{h}.spec with the
 * parameters in shortest round-trip decimal form, plus a `.json` sidecar
 * listing the energies.
 *
 * Binary entry (host byte order):
 *   char[8] magic "SXXZSPEC"
 *   u32 version, u32 L, u32 n_d, u32 reserved
 *   f64 J, f64 Delta, f64 h
 *   u64 dim
 *   u64 checksum   crc32 over the header bytes before it and the payload
 *   f64[dim] energies, f64[dim*dim] eigenvectors row-major
 *
 * A missing, truncated, mismatched or corrupt entry is a miss. Writes go to
 * a temporary file that is renamed into place.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <zlib.h>

#include "json.hpp"
#include "susyxxz/format.hpp"
#include "susyxxz/spectra.hpp"

namespace susyxxz {

inline constexpr std::uint32_t kCacheFormatVersion = 1;

class SpectrumCache {
 public:
  explicit SpectrumCache(std::filesystem::path root, std::uint32_t version = kCacheFormatVersion)
      : root_(std::move(root)), version_(version) {}

  [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }
  [[nodiscard]] std::uint32_t version() const noexcept { return version_; }
  [[nodiscard]] std::filesystem::path directory() const {
    return root_ / ("v" + std::to_string(version_));
  }

  [[nodiscard]] std::filesystem::path path_for(const SectorKey& key, const ModelParams& p) const {
    return directory() / ("L" + std::to_string(key.L) + "_nd" + std::to_string(key.n_d) + "_J" +
                          shortest_decimal(p.J) + "_D" + shortest_decimal(p.Delta) + "_h" +
                          shortest_decimal(p.h) + ".spec");
  }

  void put(const ChainSectorSpectrum& spectrum) const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory(), ec);
    if (ec) throw IoError("cannot create cache directory " + directory().string() + ": " + ec.message());

    const fs::path target = path_for(spectrum.key, spectrum.params);
    const std::vector<char> bytes = serialize(spectrum);
    write_atomically(target, bytes.data(), bytes.size());

    nlohmann::json sidecar = {
        {"version", version_},         {"L", spectrum.key.L},
        {"n_d", spectrum.key.n_d},     {"J", spectrum.params.J},
        {"Delta", spectrum.params.Delta}, {"h", spectrum.params.h},
        {"dim", spectrum.size()},
    };
    sidecar["energies"] = std::vector<double>(spectrum.energies.data(),
                                              spectrum.energies.data() + spectrum.energies.size());
    const std::string text = sidecar.dump(2) + "\n";
    fs::path json_path = target;
    json_path.replace_extension(".json");
    write_atomically(json_path, text.data(), text.size());
  }

  [[nodiscard]] std::optional<ChainSectorSpectrum> get(const SectorKey& key, const ModelParams& params) const {
    std::ifstream in(path_for(key, params), std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes, key, params);
  }

  struct EntryInfo {
    std::filesystem::path path;
    std::uintmax_t bytes = 0;
    bool valid = false;
  };

  /// Every `.spec` file under the versioned directory, with validation status.
  [[nodiscard]] std::vector<EntryInfo> entries() const {
    namespace fs = std::filesystem;
    std::vector<EntryInfo> out;
    std::error_code ec;
    if (!fs::is_directory(directory(), ec)) return out;
    for (const auto& e : fs::directory_iterator(directory())) {
      if (e.path().extension() != ".spec") continue;
      std::ifstream in(e.path(), std::ios::binary);
      std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      out.push_back({e.path(), e.file_size(), parse(bytes).has_value()});
    }
    std::sort(out.begin(), out.end(), [](const EntryInfo& a, const EntryInfo& b) { return a.path < b.path; });
    return out;
  }

  /// Removes the versioned directory; returns the number of files removed.
  std::uintmax_t clear() const {
    std::error_code ec;
    const auto n = std::filesystem::remove_all(directory(), ec);
    if (ec) throw IoError("cannot clear cache " + directory().string() + ": " + ec.message());
    return n;
  }

 private:
  static constexpr std::array<char, 8> kMagic = {'S', 'X', 'X', 'Z', 'S', 'P', 'E', 'C'};

  struct Header {
    std::array<char, 8> magic;
    std::uint32_t version;
    std::uint32_t L;
    std::uint32_t n_d;
    std::uint32_t reserved;
    double J;
    double Delta;
    double h;
    std::uint64_t dim;
    std::uint64_t checksum;
  };
  static_assert(sizeof(Header) == 64);

  static std::uint64_t crc(const char* head, std::size_t head_len, const char* payload, std::size_t len) {
    uLong c = crc32(0L, Z_NULL, 0);
    c = crc32(c, reinterpret_cast<const Bytef*>(head), static_cast<uInt>(head_len));
    c = crc32_z(c, reinterpret_cast<const Bytef*>(payload), len);
    return static_cast<std::uint64_t>(c);
  }

  [[nodiscard]] std::vector<char> serialize(const ChainSectorSpectrum& s) const {
    const auto dim = static_cast<std::size_t>(s.size());
    Header h{kMagic, version_, static_cast<std::uint32_t>(s.key.L), static_cast<std::uint32_t>(s.key.n_d), 0,
             s.params.J, s.params.Delta, s.params.h, dim, 0};
    std::vector<char> payload((dim + dim * dim) * sizeof(double));
    std::memcpy(payload.data(), s.energies.data(), dim * sizeof(double));
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = s.states;
    std::memcpy(payload.data() + dim * sizeof(double), rows.data(), dim * dim * sizeof(double));
    h.checksum = crc(reinterpret_cast<const char*>(&h), offsetof(Header, checksum), payload.data(), payload.size());

    std::vector<char> bytes(sizeof(Header) + payload.size());
    std::memcpy(bytes.data(), &h, sizeof(Header));
    std::memcpy(bytes.data() + sizeof(Header), payload.data(), payload.size());
    return bytes;
  }

  [[nodiscard]] std::optional<ChainSectorSpectrum> parse(const std::vector<char>& bytes) const {
    if (bytes.size() < sizeof(Header)) return std::nullopt;
    Header h{};
    std::memcpy(&h, bytes.data(), sizeof(Header));
    if (h.magic != kMagic || h.version != version_) return std::nullopt;
    const SectorKey key{static_cast<int>(h.L), static_cast<int>(h.n_d)};
    if (key.L < 1 || key.L > kMaxChainLength || key.n_d < 0 || key.n_d > key.L) return std::nullopt;
    const std::size_t dim = h.dim;
    if (dim != binomial(key.L, key.n_d)) return std::nullopt;
    const std::size_t payload_len = (dim + dim * dim) * sizeof(double);
    if (bytes.size() != sizeof(Header) + payload_len) return std::nullopt;
    const char* payload = bytes.data() + sizeof(Header);
    if (crc(bytes.data(), offsetof(Header, checksum), payload, payload_len) != h.checksum) return std::nullopt;

    ChainSectorSpectrum s{key, {h.J, h.Delta, h.h}, Vector(static_cast<Eigen::Index>(dim)), Matrix()};
    std::memcpy(s.energies.data(), payload, dim * sizeof(double));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(dim, dim);
    std::memcpy(rows.data(), payload + dim * sizeof(double), dim * dim * sizeof(double));
    s.states = rows;
    return s;
  }

  [[nodiscard]] std::optional<ChainSectorSpectrum> deserialize(const std::vector<char>& bytes, const SectorKey& key,
                                                               const ModelParams& params) const {
    auto s = parse(bytes);
    if (!s || s->key != key || !(s->params == params)) return std::nullopt;
    return s;
  }

  static void write_atomically(const std::filesystem::path& target, const char* data, std::size_t len) {
    namespace fs = std::filesystem;
    std::random_device rd;
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(rd());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write cache entry " + tmp.string());
      out.write(data, static_cast<std::streamsize>(len));
      if (!out) throw IoError("short write to cache entry " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw IoError("cannot publish cache entry " + target.string());
    }
  }

  std::filesystem::path root_;
  std::uint32_t version_;
};

inline ChainSectorSpectrum solve_sector(const SectorKey& key, const ModelParams& params, const SpectrumCache* cache) {
  if (cache == nullptr) return solve_sector(key, params);
  if (auto hit = cache->get(key, params)) return *std::move(hit);
  auto spectrum = solve_sector(key, params);
  cache->put(spectrum);
  return spectrum;
}

}  // namespace susyxxz
