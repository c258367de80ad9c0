#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "qcentral/errors.hpp"
#include "qcentral/gauss.hpp"
#include "qcentral/verify.hpp"

using namespace qcentral;

namespace {

const PrimeTable& table() {
  static const PrimeTable t(100'000);
  return t;
}

// The defining sum with the Jacobi symbol from trial-division factoring.
std::complex<double> tau_direct(std::int64_t k, std::uint64_t n) {
  std::complex<double> acc = 0.0;
  for (std::uint64_t a = 0; a < n; ++a) {
    const int chi = oracle::kronecker(static_cast<std::int64_t>(a), n);
    if (chi == 0) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(a) * static_cast<double>(k) /
                         static_cast<double>(n);
    acc += static_cast<double>(chi) * std::polar(1.0, angle);
  }
  return acc;
}

bool close(std::complex<double> a, std::complex<double> b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("tau and G examples") {
  CHECK(close(tau_bruteforce(0, 9), {6.0, 0.0}));
  CHECK(close(tau_bruteforce(0, 3), {0.0, 0.0}));
  CHECK(close(tau_bruteforce(1, 3), {0.0, std::sqrt(3.0)}));
  CHECK(close(gauss_G(0, 9, table()), {6.0, 0.0}));
  CHECK(close(gauss_G(1, 3, table()), {std::sqrt(3.0), 0.0}));
  CHECK(close(gauss_G(3, 9, table()), {-3.0, 0.0}));
  CHECK(close(gauss_G(1, 9, table()), {0.0, 0.0}));
  CHECK(close(tau(1, 3, table()), {0.0, std::sqrt(3.0)}));
  for (std::int64_t k : {-5, 0, 1, 12}) CHECK(close(tau(k, 1, table()), {1.0, 0.0}));
  CHECK(close(tau(2, 15, table()), tau_bruteforce(2, 15)));
  CHECK_THROWS_AS((void)tau_bruteforce(1, 8), DomainError);
  CHECK_THROWS_AS((void)gauss_G(1, 10, table()), DomainError);
}

TEST_CASE("tau_0(n) is phi(n) on squares and 0 otherwise") {
  for (std::uint64_t n = 1; n <= 401; n += 2) {
    const auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
    const double expect = r * r == n ? static_cast<double>(oracle::phi(n)) : 0.0;
    CHECK(close(tau(0, n, table()), {expect, 0.0}));
  }
}

TEST_CASE("brute force agrees with an independent defining sum") {
  for (std::uint64_t n = 1; n <= 151; n += 2) {
    for (std::int64_t k = -6; k <= 6; ++k) {
      CHECK(close(tau_bruteforce(k, n), tau_direct(k, n), 1e-9 * static_cast<double>(n)));
    }
  }
}

TEST_CASE("closed form vs brute force, odd n <= 1500, |k| <= 20") {
  const SuiteResult r = verify_gauss(1500, 20, table());
  INFO("max scaled error " << r.max_error);
  CHECK(r.ok());
  CHECK(r.cases == 750 * 41);
}

TEST_CASE("multiplicativity of G_k") {
  for (std::uint64_t m = 1; m <= 200; m += 2) {
    for (std::uint64_t n = 1; n <= 200 / m + 1; n += 2) {
      if (std::gcd(m, n) != 1 || m * n > 100'000) continue;
      for (std::int64_t k = -10; k <= 10; ++k) {
        const auto lhs = gauss_G(k, m * n, table());
        const auto rhs = gauss_G(k, m, table()) * gauss_G(k, n, table());
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
  // larger coprime pairs via brute force on the product
  for (auto [m, n] : {std::pair{15ULL, 49ULL}, std::pair{27ULL, 35ULL}, std::pair{121ULL, 9ULL}}) {
    for (std::int64_t k = -10; k <= 10; ++k) {
      const auto rhs = gauss_G(k, m, table()) * gauss_G(k, n, table());
      const auto brute = tau_bruteforce(k, m * n) / tau_prefactor(m * n);
      CHECK(std::abs(brute - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("G_k(p^beta) = 0 for odd beta <= alpha") {
  for (std::uint64_t p = 3; p <= 50; p += 2) {
    if (!oracle::is_prime(p)) continue;
    for (int alpha = 1; alpha <= 4; ++alpha) {
      std::int64_t k = 1;
      for (int i = 0; i < alpha; ++i) k *= static_cast<std::int64_t>(p);
      k *= 2;  // coprime to p, so the valuation is exactly alpha
      for (int beta = 1; beta <= 4; ++beta) {
        const auto g = gauss_G_prime_power(k, p, beta);
        if (beta <= alpha && beta % 2 == 1) CHECK(std::abs(g) == 0.0);
        if (beta <= alpha && beta % 2 == 0) {
          CHECK(g.real() == doctest::Approx(std::pow(p, beta - 1) * (p - 1)));
        }
      }
    }
    // k = 0 is the infinite-valuation case
    CHECK(std::abs(gauss_G_prime_power(0, p, 3)) == 0.0);
  }
}

TEST_CASE("|G_k(n)| <= n") {
  for (std::uint64_t n = 1; n <= 999; n += 2) {
    for (std::int64_t k : {-3, 0, 1, 7, 45}) CHECK(std::abs(gauss_G(k, n, table())) <= static_cast<double>(n) + 1e-9);
  }
}
