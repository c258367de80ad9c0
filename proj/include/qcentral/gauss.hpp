#pragma once

// Quadratic Gauss sums
//   tau_k(n) = sum_{a mod n} (a/n) e(ak/n)
//   G_k(n)   = ((1-i)/2 + (-1/n)(1+i)/2) tau_k(n)
// for odd n, by direct summation and by the prime-power closed form.

#include <complex>
#include <cstdint>

#include "qcentral/arith.hpp"

namespace qcentral {

using GaussValue = std::complex<double>;

/// (1+i)/2 + (-1/n)(1-i)/2, i.e. 1 when n = 1 mod 4 and i when n = 3 mod 4.
[[nodiscard]] GaussValue tau_prefactor(std::uint64_t n);

[[nodiscard]] GaussValue tau_bruteforce(std::int64_t k, std::uint64_t n);

/// G_k(p^beta) from exact integer data.
[[nodiscard]] GaussValue gauss_G_prime_power(std::int64_t k, std::uint64_t p, int beta);
[[nodiscard]] GaussValue gauss_G(std::int64_t k, std::uint64_t n, const PrimeTable& table);
[[nodiscard]] GaussValue tau(std::int64_t k, std::uint64_t n, const PrimeTable& table);

}  // namespace qcentral
