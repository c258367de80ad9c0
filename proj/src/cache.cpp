#include "qcentral/cache.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <system_error>

#include "qcentral/errors.hpp"

namespace qcentral {

namespace {

constexpr std::int64_t kHeaderKey = -1;

void put_u64(unsigned char* out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>((v >> (8 * b)) & 0xff);
}

std::uint64_t get_u64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | in[b];
  return v;
}

std::array<unsigned char, kCacheRecordBytes> encode(std::int64_t p, std::uint64_t bits) {
  std::array<unsigned char, kCacheRecordBytes> buf{};
  put_u64(buf.data(), static_cast<std::uint64_t>(p));
  put_u64(buf.data() + 8, bits);
  return buf;
}

void write_record(std::FILE* f, std::int64_t p, std::uint64_t bits, const std::filesystem::path& path) {
  const auto buf = encode(p, bits);
  if (std::fwrite(buf.data(), 1, buf.size(), f) != buf.size() || std::fflush(f) != 0) {
    throw ResourceError("cannot append to cache " + path.string());
  }
}

std::FILE* open_append(const std::filesystem::path& path, bool truncate) {
  std::FILE* f = std::fopen(path.c_str(), truncate ? "wb" : "ab");
  if (f == nullptr) throw ResourceError("cannot open cache " + path.string());
  return f;
}

}  // namespace

std::uint64_t cache_version(const OmegaWeights& weights, const AfeOptions& opts) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  const auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      hash ^= (v >> (8 * b)) & 0xff;
      hash *= 0x100000001b3ULL;
    }
  };
  mix(weights.version());
  mix(std::bit_cast<std::uint64_t>(opts.tail_tolerance));
  mix(std::bit_cast<std::uint64_t>(opts.truncation_scale));
  return hash;
}

std::vector<CacheRecord> read_cache_records(const std::filesystem::path& path) {
  std::vector<CacheRecord> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::array<unsigned char, kCacheRecordBytes> buf{};
  while (in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    out.push_back({static_cast<std::int64_t>(get_u64(buf.data())),
                   std::bit_cast<double>(get_u64(buf.data() + 8))});
  }
  return out;
}

LValueCache::LValueCache(std::filesystem::path path, std::uint64_t version,
                         const std::function<void(const std::string&)>& warn)
    : path_(std::move(path)), version_(version) {
  std::error_code ec;
  const bool exists = std::filesystem::exists(path_, ec);
  std::uint64_t complete = 0;
  bool fresh = !exists;
  if (exists) {
    const auto size = std::filesystem::file_size(path_, ec);
    if (ec) throw ResourceError("cannot stat cache " + path_.string());
    complete = size / kCacheRecordBytes;
    const auto records = read_cache_records(path_);
    if (records.empty()) {
      fresh = true;
    } else if (records.front().p != kHeaderKey) {
      throw ResourceError("cache " + path_.string() + " is corrupt: missing header record");
    } else if (std::bit_cast<std::uint64_t>(records.front().value) != version_) {
      invalidated_ = true;
      fresh = true;
      if (warn) warn("cache " + path_.string() + " was written by another weights version; invalidated");
    } else {
      for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.p <= 1 || r.p % 8 != 1 || !std::isfinite(r.value)) {
          throw ResourceError("cache " + path_.string() + " is corrupt at record " + std::to_string(i));
        }
        values_.emplace(static_cast<std::uint64_t>(r.p), r.value);
      }
      // Drop a partial record left by an interrupted append.
      if (size % kCacheRecordBytes != 0) {
        std::filesystem::resize_file(path_, complete * kCacheRecordBytes, ec);
        if (ec) throw ResourceError("cannot repair cache " + path_.string());
      }
    }
  }
  out_ = open_append(path_, fresh);
  if (fresh) write_record(out_, kHeaderKey, version_, path_);
}

LValueCache::~LValueCache() {
  if (out_ != nullptr) std::fclose(out_);
}

bool LValueCache::find(std::uint64_t p, double& value) const {
  std::shared_lock lock(mutex_);
  const auto it = values_.find(p);
  if (it == values_.end()) return false;
  value = it->second;
  return true;
}

double LValueCache::get_or_compute(std::uint64_t p, const std::function<double()>& compute) {
  double value = 0.0;
  if (find(p, value)) {
    ++hits_;
    return value;
  }
  ++misses_;
  const double computed = compute();
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = values_.emplace(p, computed);
  if (inserted) append(p, computed);
  return it->second;
}

void LValueCache::append(std::uint64_t p, double value) {
  write_record(out_, static_cast<std::int64_t>(p), std::bit_cast<std::uint64_t>(value), path_);
}

std::size_t LValueCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

std::uint64_t LValueCache::hits() const { return hits_.load(); }
std::uint64_t LValueCache::misses() const { return misses_.load(); }

double lvalue_cache_get_or_compute(std::uint64_t p, LValueCache& cache, const OmegaWeights& weights,
                                   const PrimeTable& table, const AfeOptions& opts) {
  if (p % 8 != 1 || !table.is_prime(p)) throw DomainError("cached central values need a prime p = 1 mod 8");
  return cache.get_or_compute(p, [&] { return afe_value(1, p, weights, table, opts); });
}

}  // namespace qcentral
