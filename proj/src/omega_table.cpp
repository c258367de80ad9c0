#include "qcentral/omega_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qcentral/errors.hpp"

namespace qcentral {

namespace {

using cplx = std::complex<double>;

constexpr int kChebNodes = 24;
constexpr double kSegmentTolerance = 1e-14;
constexpr double kNegligible = 1e-18;
// Bump when the tabulation scheme changes; feeds the cache version.
constexpr std::uint64_t kTableRevision = 4;

cplx log_kernel(int j, cplx s) {
  static const double lg_quarter = std::lgamma(0.25);
  const cplx w = std::exp((s - 0.5) * std::numbers::ln2);
  const double jd = static_cast<double>(j);
  return jd * (log_gamma(s / 2.0 + 0.25) - lg_quarter) + jd * std::log(1.0 - w) - std::log(s);
}

double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t m = c.size() - 1; m >= 1; --m) {
    const double b0 = 2.0 * x * b1 - b2 + c[m];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + 0.5 * c[0];
}

}  // namespace

struct OmegaTable::NodeCache {
  double c;
  std::vector<cplx> log_g;  // at s = c + i k h, k = 0, 1, ...
};

OmegaTable::OmegaTable(const OmegaWeight& settings)
    : j_(settings.j), T_(settings.T), h_(settings.h) {
  OmegaWeight probe = settings;
  probe.validate();

  // First xi past which |omega_j| stays below kNegligible, but never
  // earlier than 4j + 10.
  double xi = 1.0;
  while (std::abs(sample(xi)) >= kNegligible) {
    xi *= 1.05;
    if (xi > 1e4) throw NumericalError("omega table: no decay found for j=" + std::to_string(j_));
  }
  cutoff_ = std::max(xi, 4.0 * j_ + 10.0);
  u_min_ = std::log(kMinXi);
  u_max_ = std::log(cutoff_);

  for (double u0 = u_min_; u0 < u_max_; u0 += 1.0) {
    build_segment(u0, std::min(u0 + 1.0, u_max_), 0);
  }
  segment_starts_.reserve(segments_.size());
  for (const auto& seg : segments_) segment_starts_.push_back(seg.u0);

  const auto steps = static_cast<std::size_t>(std::ceil(u_max_ / kEnvelopeStep)) + 1;
  envelope_.assign(steps, 0.0);
  for (std::size_t k = steps; k-- > 0;) {
    const double here = std::abs(at_log(static_cast<double>(k) * kEnvelopeStep));
    envelope_[k] = (k + 1 < steps) ? std::max(here, envelope_[k + 1]) : here;
  }
}

double OmegaTable::envelope(double xi) const {
  if (!(xi > 0.0)) throw DomainError("omega_j needs xi > 0");
  if (xi >= cutoff_) return 0.0;
  if (xi < 1.0) {
    return 1.1 * std::max(envelope_.front(), std::pow(1.0 - 1.0 / std::numbers::sqrt2, j_) + 1.0);
  }
  const auto k = static_cast<std::size_t>(std::floor(std::log(xi) / kEnvelopeStep));
  return 1.1 * envelope_[std::min(k, envelope_.size() - 1)];
}

OmegaTable::~OmegaTable() = default;

const OmegaTable::NodeCache& OmegaTable::nodes_for(double c) const {
  std::lock_guard lock(cache_mutex_);
  for (const auto& cache : caches_) {
    if (cache->c == c) return *cache;
  }
  auto cache = std::make_unique<NodeCache>();
  cache->c = c;
  const auto K = static_cast<long>(std::floor(T_ / h_));
  double peak = -1e300;
  for (long k = 0; k <= K; ++k) {
    const cplx lg = log_kernel(j_, cplx(c, static_cast<double>(k) * h_));
    peak = std::max(peak, lg.real());
    cache->log_g.push_back(lg);
    // Past the peak the Gamma factor decays monotonically; e^-60 is far
    // below double resolution relative to the peak.
    if (lg.real() < peak - 60.0 && k > 100) break;
  }
  caches_.push_back(std::move(cache));
  return *caches_.back();
}

double OmegaTable::sample(double xi) const {
  if (!(xi > 0.0)) throw DomainError("omega_j needs xi > 0");
  double c;
  double residue = 0.0;
  if (xi < 1.0) {
    // Left of s = 0: xi^{-s} stays small and the pole supplies the constant.
    c = -0.25;
    residue = std::pow(1.0 - 1.0 / std::numbers::sqrt2, j_);
  } else {
    const double saddle = 0.5 * std::pow(xi, 2.0 / j_) - 0.5;
    c = std::max(1.5, std::round(2.0 * saddle) / 2.0);
  }
  const NodeCache& nodes = nodes_for(c);
  const double u = std::log(xi);

  double fine = 0.0;
  double coarse = 0.0;
  double l1 = 0.0;
  for (std::size_t k = 0; k < nodes.log_g.size(); ++k) {
    const cplx lg = nodes.log_g[k];
    const double t = static_cast<double>(k) * h_;
    const double mag = std::exp(lg.real() - c * u);
    const double re = mag * std::cos(lg.imag() - t * u);
    const double weight = (k == 0) ? 0.5 : 1.0;
    fine += weight * re;
    if (k % 2 == 0) coarse += weight * re;
    l1 += mag;
  }
  fine *= h_ / std::numbers::pi;
  coarse *= 2.0 * h_ / std::numbers::pi;
  l1 *= h_ / std::numbers::pi;
  if (std::abs(fine - coarse) > 1e-10 * l1 + 1e-12 * std::abs(fine) + 1e-300) {
    throw NumericalError("omega table sample failed refinement check at xi=" + std::to_string(xi));
  }
  return residue + fine;
}

void OmegaTable::build_segment(double u0, double u1, int depth) {
  std::vector<double> values(kChebNodes);
  const double mid = 0.5 * (u0 + u1);
  const double half = 0.5 * (u1 - u0);
  for (int k = 0; k < kChebNodes; ++k) {
    const double x = std::cos(std::numbers::pi * (k + 0.5) / kChebNodes);
    values[k] = sample(std::exp(mid + half * x));
  }
  std::vector<double> coeffs(kChebNodes);
  for (int m = 0; m < kChebNodes; ++m) {
    double acc = 0.0;
    for (int k = 0; k < kChebNodes; ++k) {
      acc += values[k] * std::cos(std::numbers::pi * m * (k + 0.5) / kChebNodes);
    }
    coeffs[m] = 2.0 * acc / kChebNodes;
  }
  const double tail = std::abs(coeffs[kChebNodes - 1]) + std::abs(coeffs[kChebNodes - 2]);
  if (tail > kSegmentTolerance && depth < 10) {
    build_segment(u0, mid, depth + 1);
    build_segment(mid, u1, depth + 1);
    return;
  }
  segments_.push_back({u0, u1, std::move(coeffs)});
}

double OmegaTable::at_log(double u) const {
  if (u >= u_max_) return 0.0;
  if (u < u_min_) return sample(std::exp(u));
  auto it = std::upper_bound(segment_starts_.begin(), segment_starts_.end(), u);
  const auto& seg = segments_[static_cast<std::size_t>(it - segment_starts_.begin()) - 1];
  const double x = (2.0 * u - seg.u0 - seg.u1) / (seg.u1 - seg.u0);
  return clenshaw(seg.coeffs, x);
}

double OmegaTable::operator()(double xi) const {
  if (!(xi > 0.0)) throw DomainError("omega_j needs xi > 0");
  return at_log(std::log(xi));
}

OmegaWeights::OmegaWeights(double T, double h) : T_(T), h_(h) {
  OmegaWeight{1, 1.5, T, h}.validate();
}

OmegaWeights::~OmegaWeights() = default;

const OmegaTable& OmegaWeights::table(int j) const {
  if (j < 1 || j > 3) throw DomainError("omega tables exist for j = 1, 2, 3");
  const auto idx = static_cast<std::size_t>(j - 1);
  std::call_once(once_[idx], [&] { tables_[idx] = std::make_unique<OmegaTable>(OmegaWeight{j, 1.5, T_, h_}); });
  return *tables_[idx];
}

std::uint64_t OmegaWeights::version() const noexcept {
  // FNV-1a over the settings that determine tabulated values.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  const auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      hash ^= (v >> (8 * b)) & 0xff;
      hash *= 0x100000001b3ULL;
    }
  };
  mix(kTableRevision);
  mix(std::bit_cast<std::uint64_t>(T_));
  mix(std::bit_cast<std::uint64_t>(h_));
  mix(static_cast<std::uint64_t>(kChebNodes));
  mix(std::bit_cast<std::uint64_t>(kSegmentTolerance));
  return hash;
}

const OmegaWeights& OmegaWeights::standard() {
  static const OmegaWeights weights;
  return weights;
}

}  // namespace qcentral
