#pragma once

// Append-only file cache of central values L(1/2, chi_p).
//
// Layout: 16-byte little-endian records (int64 p, float64 value). The first
// record is a header with p = -1 whose value slot carries the 64-bit version
// of everything that affects the stored values. Appends go through a single
// writer; a reader that finds a trailing partial record ignores it.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcentral/arith.hpp"
#include "qcentral/lcentral.hpp"
#include "qcentral/omega_table.hpp"

namespace qcentral {

struct CacheRecord {
  std::int64_t p;
  double value;
};

inline constexpr std::size_t kCacheRecordBytes = 16;

/// Version tag combining the omega tabulation and the AFE truncation options.
[[nodiscard]] std::uint64_t cache_version(const OmegaWeights& weights, const AfeOptions& opts);

/// Every complete record in the file, header included. Missing file gives an
/// empty vector.
[[nodiscard]] std::vector<CacheRecord> read_cache_records(const std::filesystem::path& path);

class LValueCache {
 public:
  /// Opens or creates the cache. A header with another version invalidates
  /// the file (it is rewritten empty) and `warn` is called. A file that does
  /// not start with a header, or holds records with p != 1 mod 8 or
  /// non-finite values, throws ResourceError.
  LValueCache(std::filesystem::path path, std::uint64_t version,
              const std::function<void(const std::string&)>& warn = {});
  ~LValueCache();
  LValueCache(const LValueCache&) = delete;
  LValueCache& operator=(const LValueCache&) = delete;

  [[nodiscard]] bool find(std::uint64_t p, double& value) const;
  /// Safe to call from several threads. `compute` runs outside the lock; the
  /// first value stored for p wins.
  double get_or_compute(std::uint64_t p, const std::function<double()>& compute);

  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] bool invalidated() const noexcept { return invalidated_; }
  [[nodiscard]] std::uint64_t hits() const;
  [[nodiscard]] std::uint64_t misses() const;
  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void append(std::uint64_t p, double value);

  std::filesystem::path path_;
  std::uint64_t version_;
  bool invalidated_ = false;
  std::FILE* out_ = nullptr;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, double> values_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

/// Cached L(1/2, chi_p) through the j = 1 series.
double lvalue_cache_get_or_compute(std::uint64_t p, LValueCache& cache, const OmegaWeights& weights,
                                   const PrimeTable& table, const AfeOptions& opts = {});

}  // namespace qcentral
