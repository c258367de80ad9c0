#include "qcentral/arith.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <cstdlib>
#include <mutex>
#include <new>
#include <string>

#include "qcentral/errors.hpp"

namespace qcentral {

bool Factorization::squarefree() const noexcept {
  for (const auto& pp : factors) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 2 || limit > kMaxLimit) {
    throw ConfigError("prime table limit must lie in [2, 1e9], got " + std::to_string(limit));
  }
  try {
    spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate prime table up to " + std::to_string(limit));
  }
  // Linear sieve: every composite is struck exactly once by its least prime.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(i);
    }
    const std::uint64_t si = spf_[i];
    for (std::uint64_t p : primes_) {
      if (p > si || p * i > limit) break;
      spf_[p * i] = static_cast<std::uint32_t>(p);
    }
  }
}

void PrimeTable::check(std::uint64_t n) const {
  if (n > limit_) {
    throw RangeError(std::to_string(n) + " exceeds prime table limit " + std::to_string(limit_));
  }
}

std::uint64_t PrimeTable::smallest_prime_factor(std::uint64_t n) const {
  check(n);
  if (n < 2) throw DomainError("smallest prime factor needs n >= 2");
  return spf_[n];
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  check(n);
  return n >= 2 && spf_[n] == n;
}

Factorization PrimeTable::factorize(std::uint64_t n) const {
  if (n == 0) throw DomainError("cannot factorize 0");
  check(n);
  Factorization f;
  f.value = n;
  while (n > 1) {
    const std::uint64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  return f;
}

PrimeTable sieve_primes(std::uint64_t limit) { return PrimeTable(limit); }

std::vector<std::uint64_t> divisors(const Factorization& f) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> squarefree_divisors(const Factorization& f) {
  std::vector<std::uint64_t> out{1};
  for (const auto& pp : f.factors) {
    const std::size_t base = out.size();
    for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pp.prime);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int moebius(const Factorization& f) noexcept {
  if (!f.squarefree()) return 0;
  return (f.factors.size() % 2 == 0) ? 1 : -1;
}

int moebius(std::uint64_t n, const PrimeTable& table) { return moebius(table.factorize(n)); }

bool is_squarefree(std::uint64_t n, const PrimeTable& table) {
  return table.factorize(n).squarefree();
}

std::uint64_t euler_phi(std::uint64_t n, const PrimeTable& table) {
  std::uint64_t phi = 1;
  for (const auto& [p, e] : table.factorize(n).factors) {
    phi *= p - 1;
    for (int k = 1; k < e; ++k) phi *= p;
  }
  return phi;
}

std::uint64_t divisor_dk(int k, const Factorization& f) {
  if (k < 1) throw DomainError("divisor_dk needs k >= 1");
  std::uint64_t value = 1;
  for (const auto& pp : f.factors) {
    // d_k(p^e) = C(e + k - 1, k - 1) = C(e + k - 1, e)
    std::uint64_t c = 1;
    for (int i = 1; i <= pp.exponent; ++i) {
      c = c * static_cast<std::uint64_t>(k - 1 + i) / static_cast<std::uint64_t>(i);
    }
    value *= c;
  }
  return value;
}

std::uint64_t divisor_dk(int k, std::uint64_t n, const PrimeTable& table) {
  return divisor_dk(k, table.factorize(n));
}

const Rational& divisor_dhalf_prime_power(int exponent) {
  if (exponent < 0) throw DomainError("negative exponent");
  static std::mutex mutex;
  // deque: references stay valid while other threads extend the cache
  static std::deque<Rational> cache{Rational(1)};
  std::lock_guard lock(mutex);
  while (static_cast<int>(cache.size()) <= exponent) {
    // sum_{i=0}^{e} f(p^i) f(p^{e-i}) = 1  =>  2 f(p^e) = 1 - sum_{0<i<e} f(p^i) f(p^{e-i})
    const int e = static_cast<int>(cache.size());
    Rational rest = 0;
    for (int i = 1; i < e; ++i) rest += cache[i] * cache[e - i];
    cache.push_back((Rational(1) - rest) / 2);
  }
  return cache[exponent];
}

Rational divisor_dhalf(std::uint64_t n, const PrimeTable& table) {
  Rational value = 1;
  for (const auto& pp : table.factorize(n).factors) {
    value *= Rational(divisor_dhalf_prime_power(pp.exponent));
  }
  return value;
}

double divisor_dhalf_value(std::uint64_t n, const PrimeTable& table) {
  return static_cast<double>(divisor_dhalf(n, table));
}

namespace {

// (2/m) for odd m, indexed by m mod 8.
constexpr int kTwoTable[8] = {0, 1, 0, -1, 0, -1, 0, 1};

}  // namespace

int jacobi(std::int64_t a, std::uint64_t m) {
  if (m == 0 || m % 2 == 0) throw DomainError("jacobi symbol needs odd positive modulus");
  std::uint64_t x;
  if (a >= 0) {
    x = static_cast<std::uint64_t>(a) % m;
  } else {
    const std::uint64_t r = static_cast<std::uint64_t>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
    x = (m - 1 - r) % m;
  }
  std::uint64_t y = m;
  int sign = 1;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      if ((y & 7) == 3 || (y & 7) == 5) sign = -sign;
    }
    std::swap(x, y);
    if ((x & 3) == 3 && (y & 3) == 3) sign = -sign;
    x %= y;
  }
  return y == 1 ? sign : 0;
}

int kronecker(std::int64_t n, std::int64_t m) noexcept {
  if (m == 0) return (n == 1 || n == -1) ? 1 : 0;
  if (n % 2 == 0 && m % 2 == 0) return 0;

  std::int64_t a = n;
  std::uint64_t b;
  int k = 1;
  if (m < 0) {
    b = static_cast<std::uint64_t>(-(m + 1)) + 1;
    if (a < 0) k = -k;
  } else {
    b = static_cast<std::uint64_t>(m);
  }
  int v = 0;
  while (b % 2 == 0) {
    b /= 2;
    ++v;
  }
  if (v % 2 == 1) k *= kTwoTable[static_cast<std::uint64_t>(a) & 7];
  if (b == 1) return k;
  // b is odd and > 1: (n/b) is the Jacobi symbol.
  return k * jacobi(a, b);
}

SquarefreeParts squarefree_decompose(std::uint64_t n, const PrimeTable& table) {
  SquarefreeParts parts{1, 1};
  for (const auto& [p, e] : table.factorize(n).factors) {
    if (e % 2 == 1) parts.squarefree *= p;
    for (int i = 0; i < e / 2; ++i) parts.square_root *= p;
  }
  return parts;
}

DiscriminantParts fundamental_discriminant_decompose(std::int64_t m, const PrimeTable& table) {
  if (m == 0) throw DomainError("fundamental discriminant decomposition of 0");
  const std::uint64_t abs_m =
      m > 0 ? static_cast<std::uint64_t>(m) : static_cast<std::uint64_t>(-(m + 1)) + 1;
  const auto [s, t] = squarefree_decompose(abs_m, table);
  const std::int64_t signed_s = m > 0 ? static_cast<std::int64_t>(s) : -static_cast<std::int64_t>(s);
  // signed_s mod 4 in {1, 2, 3}; squarefree so never 0.
  const std::int64_t r = ((signed_s % 4) + 4) % 4;
  if (r == 1) return {signed_s, 2 * t};
  return {4 * signed_s, t};
}

bool is_fundamental_discriminant(std::int64_t d, const PrimeTable& table) {
  if (d == 1) return true;
  if (d == 0) return false;
  const std::int64_t r = ((d % 4) + 4) % 4;
  const auto magnitude = [](std::int64_t x) {
    return x > 0 ? static_cast<std::uint64_t>(x) : static_cast<std::uint64_t>(-(x + 1)) + 1;
  };
  if (r == 1) return is_squarefree(magnitude(d), table);
  if (r != 0) return false;
  const std::int64_t k = d / 4;
  const std::int64_t rk = ((k % 4) + 4) % 4;
  return (rk == 2 || rk == 3) && is_squarefree(magnitude(k), table);
}

double von_mangoldt(std::uint64_t n, const PrimeTable& table) {
  if (n < 2) return 0.0;
  const auto f = table.factorize(n);
  return f.factors.size() == 1 ? std::log(static_cast<double>(f.factors[0].prime)) : 0.0;
}

VaughanTerms vaughan_decompose(std::uint64_t n, double V, const PrimeTable& table) {
  if (V <= 1.0) throw DomainError("Vaughan parameter V must exceed 1");
  VaughanTerms out;
  if (n < 1) throw DomainError("Vaughan decomposition needs n >= 1");
  if (n == 1) return out;

  const auto f = table.factorize(n);
  const double log_n = std::log(static_cast<double>(n));
  if (static_cast<double>(n) <= V) out.t1 = von_mangoldt(n, table);

  // Squarefree divisors a carry mu(a); prime-power divisors b of n/a carry
  // Lambda(b). The trailing "* 1" absorbs whatever remains.
  for (std::uint64_t a : squarefree_divisors(f)) {
    const int mu = moebius(table.factorize(a));
    const double ad = static_cast<double>(a);
    if (ad <= V) out.t2 += mu * (log_n - std::log(ad));

    const std::uint64_t rest = n / a;
    for (const auto& pp : f.factors) {
      std::uint64_t b = 1;
      const double log_p = std::log(static_cast<double>(pp.prime));
      for (int e = 1; e <= pp.exponent; ++e) {
        b *= pp.prime;
        if (rest % b != 0) break;
        const double bd = static_cast<double>(b);
        if (ad <= V && bd <= V) out.t3 -= mu * log_p;
        if (ad > V && bd > V) out.t4 += mu * log_p;
      }
    }
  }
  return out;
}

namespace {

// sum over squarefree l with l^2 | n, split by whether l <= Y.
std::pair<int, int> square_divisor_split(std::uint64_t n, double Y, const PrimeTable& table) {
  if (n < 1) throw DomainError("mu^2 split needs n >= 1");
  Factorization squares;
  for (const auto& pp : table.factorize(n).factors) {
    if (pp.exponent >= 2) squares.factors.push_back({pp.prime, 1});
  }
  int small = 0;
  int large = 0;
  for (std::uint64_t l : squarefree_divisors(squares)) {
    const int mu = moebius(table.factorize(l));
    if (static_cast<double>(l) <= Y) {
      small += mu;
    } else {
      large += mu;
    }
  }
  return {small, large};
}

}  // namespace

int n_y(std::uint64_t n, double Y, const PrimeTable& table) {
  return square_divisor_split(n, Y, table).first;
}

int r_y(std::uint64_t n, double Y, const PrimeTable& table) {
  return square_divisor_split(n, Y, table).second;
}

}  // namespace qcentral
