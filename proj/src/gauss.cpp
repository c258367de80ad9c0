#include "qcentral/gauss.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "qcentral/errors.hpp"

namespace qcentral {

namespace {

void require_odd(std::uint64_t n) {
  if (n == 0 || n % 2 == 0) throw DomainError("Gauss sums are defined here for odd n >= 1 only");
}

// p-adic valuation of k; nullopt encodes k = 0 (infinite valuation).
std::optional<int> valuation(std::int64_t k, std::uint64_t p) {
  if (k == 0) return std::nullopt;
  std::uint64_t m = k > 0 ? static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(-(k + 1)) + 1;
  int alpha = 0;
  while (m % p == 0) {
    m /= p;
    ++alpha;
  }
  return alpha;
}

std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

GaussValue tau_prefactor(std::uint64_t n) {
  require_odd(n);
  return n % 4 == 1 ? GaussValue(1.0, 0.0) : GaussValue(0.0, 1.0);
}

GaussValue tau_bruteforce(std::int64_t k, std::uint64_t n) {
  require_odd(n);
  if (n == 1) return {1.0, 0.0};
  const std::int64_t sn = static_cast<std::int64_t>(n);
  const std::int64_t kr = ((k % sn) + sn) % sn;
  double re = 0.0;
  double im = 0.0;
  for (std::uint64_t a = 1; a < n; ++a) {
    const int chi = jacobi(static_cast<std::int64_t>(a), n);
    if (chi == 0) continue;
    // reduce a k mod n exactly before converting to an angle
    const auto ak = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * kr) % n);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(ak) / static_cast<double>(n);
    re += chi * std::cos(angle);
    im += chi * std::sin(angle);
  }
  return {re, im};
}

GaussValue gauss_G_prime_power(std::int64_t k, std::uint64_t p, int beta) {
  if (beta < 1) throw DomainError("prime power exponent must be >= 1");
  if (p % 2 == 0) throw DomainError("Gauss sums need odd p");
  const auto alpha = valuation(k, p);
  const bool beta_even = beta % 2 == 0;

  if (!alpha || beta <= *alpha) {
    if (!beta_even) return {0.0, 0.0};
    const std::uint64_t phi = ipow(p, beta - 1) * (p - 1);
    return {static_cast<double>(phi), 0.0};
  }
  if (beta == *alpha + 1) {
    const double pa = static_cast<double>(ipow(p, *alpha));
    if (beta_even) return {-pa, 0.0};
    const std::int64_t unit = k / static_cast<std::int64_t>(ipow(p, *alpha));
    const int legendre = jacobi(unit, p);
    return {legendre * pa * std::sqrt(static_cast<double>(p)), 0.0};
  }
  return {0.0, 0.0};
}

GaussValue gauss_G(std::int64_t k, std::uint64_t n, const PrimeTable& table) {
  require_odd(n);
  GaussValue value(1.0, 0.0);
  for (const auto& [p, e] : table.factorize(n).factors) {
    value *= gauss_G_prime_power(k, p, e);
    if (value == GaussValue(0.0, 0.0)) break;
  }
  return value;
}

GaussValue tau(std::int64_t k, std::uint64_t n, const PrimeTable& table) {
  return tau_prefactor(n) * gauss_G(k, n, table);
}

}  // namespace qcentral
