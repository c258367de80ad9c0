#pragma once

// Integer arithmetic: smallest-prime-factor sieve, factorization, the
// multiplicative functions used throughout, the Kronecker symbol, and a few
// exact combinatorial identities (Vaughan, the mu^2 split).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qcentral {

using Rational = boost::multiprecision::cpp_rational;

struct PrimePower {
  std::uint64_t prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::uint64_t value = 1;
  std::vector<PrimePower> factors;  // ascending primes

  [[nodiscard]] bool squarefree() const noexcept;
  [[nodiscard]] int omega() const noexcept { return static_cast<int>(factors.size()); }
};

// Immutable after construction; safe to share between threads.
class PrimeTable {
 public:
  static constexpr std::uint64_t kMaxLimit = 1'000'000'000;

  explicit PrimeTable(std::uint64_t limit);

  [[nodiscard]] std::uint64_t limit() const noexcept { return limit_; }
  [[nodiscard]] std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  [[nodiscard]] std::uint64_t smallest_prime_factor(std::uint64_t n) const;
  [[nodiscard]] bool is_prime(std::uint64_t n) const;
  [[nodiscard]] Factorization factorize(std::uint64_t n) const;

 private:
  void check(std::uint64_t n) const;

  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint64_t> primes_;
};

[[nodiscard]] PrimeTable sieve_primes(std::uint64_t limit);

// All divisors (ascending) and all squarefree divisors (ascending).
[[nodiscard]] std::vector<std::uint64_t> divisors(const Factorization& f);
[[nodiscard]] std::vector<std::uint64_t> squarefree_divisors(const Factorization& f);

[[nodiscard]] int moebius(const Factorization& f) noexcept;
[[nodiscard]] int moebius(std::uint64_t n, const PrimeTable& table);
[[nodiscard]] bool is_squarefree(std::uint64_t n, const PrimeTable& table);
[[nodiscard]] std::uint64_t euler_phi(std::uint64_t n, const PrimeTable& table);

/// k-fold divisor function d_k(n); d_1 = 1, d_2 = number of divisors.
[[nodiscard]] std::uint64_t divisor_dk(int k, std::uint64_t n, const PrimeTable& table);
[[nodiscard]] std::uint64_t divisor_dk(int k, const Factorization& f);

/// The multiplicative square root of the constant function 1 under Dirichlet
/// convolution, d_{1/2}. Exact.
[[nodiscard]] Rational divisor_dhalf(std::uint64_t n, const PrimeTable& table);
[[nodiscard]] double divisor_dhalf_value(std::uint64_t n, const PrimeTable& table);
/// d_{1/2}(p^e), which does not depend on p.
[[nodiscard]] const Rational& divisor_dhalf_prime_power(int exponent);

/// Jacobi symbol (a/m) for odd m > 0.
[[nodiscard]] int jacobi(std::int64_t a, std::uint64_t m);
/// Kronecker symbol (n/m), completed to all integers m.
[[nodiscard]] int kronecker(std::int64_t n, std::int64_t m) noexcept;

struct SquarefreeParts {
  std::uint64_t squarefree;  // s
  std::uint64_t square_root;  // t, with n = s t^2
};
[[nodiscard]] SquarefreeParts squarefree_decompose(std::uint64_t n, const PrimeTable& table);

struct DiscriminantParts {
  std::int64_t discriminant;  // m1, a fundamental discriminant or 1
  std::uint64_t cofactor;     // m2 > 0, with 4m = m1 m2^2
};
[[nodiscard]] DiscriminantParts fundamental_discriminant_decompose(std::int64_t m,
                                                                   const PrimeTable& table);
[[nodiscard]] bool is_fundamental_discriminant(std::int64_t d, const PrimeTable& table);

[[nodiscard]] double von_mangoldt(std::uint64_t n, const PrimeTable& table);

struct VaughanTerms {
  double t1 = 0.0;  // Lambda_{<=V}
  double t2 = 0.0;  // (mu_{<=V} * log)
  double t3 = 0.0;  // -(mu_{<=V} * Lambda_{<=V} * 1)
  double t4 = 0.0;  // (mu_{>V} * Lambda_{>V} * 1)

  [[nodiscard]] double sum() const noexcept { return t1 + t2 + t3 + t4; }
};
[[nodiscard]] VaughanTerms vaughan_decompose(std::uint64_t n, double V, const PrimeTable& table);

// mu^2(n) = N_Y(n) + R_Y(n), splitting sum_{l^2 | n} mu(l) at l = Y.
[[nodiscard]] int n_y(std::uint64_t n, double Y, const PrimeTable& table);
[[nodiscard]] int r_y(std::uint64_t n, double Y, const PrimeTable& table);

}  // namespace qcentral
