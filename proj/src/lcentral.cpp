#include "qcentral/lcentral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcentral/errors.hpp"
#include "qcentral/parallel.hpp"
#include "qcentral/special.hpp"
#include "qcentral/summation.hpp"

namespace qcentral {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

double afe_prefactor(int j) { return 2.0 / std::pow(1.0 - kInvSqrt2, 2 * j); }

// Crude upper estimate of sum_{nu <= x} d_j(nu) / sqrt(nu).
double dj_mass(int j, double x) {
  return 2.0 * std::sqrt(x) * std::pow(1.0 + std::log(std::max(x, 1.0)), j - 1);
}

// Tail estimate for truncating at xi (i.e. at nu = xi / scale): dyadic blocks
// bounded by the omega envelope times the d_j mass of the block.
double tail_estimate(int j, const OmegaTable& omega, double xi, double scale) {
  double total = 0.0;
  for (double x = xi; x < omega.cutoff(); x *= 2.0) {
    total += omega.envelope(x) * dj_mass(j, 2.0 * x / scale);
  }
  return afe_prefactor(j) * total;
}

struct Truncation {
  double xi = 0.0;
  double tail = 0.0;
  std::uint64_t terms = 0;
};

Truncation choose_truncation(int j, const OmegaTable& omega, double scale, const AfeOptions& opts) {
  Truncation t;
  double xi = std::min(4.0 * j + 10.0, omega.cutoff());
  double tail = tail_estimate(j, omega, xi, scale);
  while (tail > opts.tail_tolerance && xi < omega.cutoff()) {
    xi = std::min(xi * 1.05, omega.cutoff());
    tail = tail_estimate(j, omega, xi, scale);
  }
  t.xi = xi * opts.truncation_scale;
  t.tail = tail_estimate(j, omega, std::min(t.xi, omega.cutoff()), scale);
  const double terms = std::floor(t.xi / scale);
  if (terms > static_cast<double>(opts.max_terms)) {
    throw NumericalError("approximate functional equation needs " + std::to_string(terms) +
                         " terms, above the cap of " + std::to_string(opts.max_terms));
  }
  t.terms = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(terms));
  return t;
}

// chi_n(nu) d_j(nu) for odd nu <= limit, stored at (nu - 1) / 2. Filled
// multiplicatively from the smallest prime factor; chi_n(q) = (q/n) for odd
// primes q by reciprocity, as n = 1 mod 4.
std::vector<std::int32_t> odd_coefficients(int j, std::uint64_t n, std::uint64_t limit,
                                           const PrimeTable& table) {
  if (limit > table.limit()) {
    throw RangeError("approximate functional equation needs primes up to " + std::to_string(limit) +
                     " but the table stops at " + std::to_string(table.limit()));
  }
  std::vector<std::int32_t> coef((limit + 1) / 2, 0);
  if (coef.empty()) return coef;
  coef[0] = 1;
  for (std::uint64_t nu = 3; nu <= limit; nu += 2) {
    const std::uint64_t p = table.smallest_prime_factor(nu);
    if (p == nu) {
      coef[nu / 2] = jacobi(static_cast<std::int64_t>(nu % n), n) * j;
      continue;
    }
    std::uint64_t m = nu;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    const std::int32_t chi_p = coef[p / 2] / j;
    if (chi_p == 0) continue;
    // d_j(p^e) = C(e + j - 1, j - 1)
    std::int32_t dj = 1;
    for (int i = 1; i <= j - 1; ++i) dj = dj * (e + i) / i;
    const std::int32_t sign = (chi_p < 0 && e % 2 == 1) ? -1 : 1;
    coef[nu / 2] = coef[m / 2] * sign * dj;
  }
  return coef;
}

LValueRecord weighted_sum(int j, std::uint64_t n, double scale, const OmegaWeights& weights,
                          const PrimeTable& table, const AfeOptions& opts) {
  opts.validate();
  const OmegaTable& omega = weights.table(j);
  const Truncation trunc = choose_truncation(j, omega, scale, opts);
  const auto coef = odd_coefficients(j, n, trunc.terms, table);

  const double log_scale = std::log(scale);
  CompensatedSum sum;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (coef[i] == 0) continue;
    const double nu = static_cast<double>(2 * i + 1);
    sum.add(coef[i] / std::sqrt(nu) * omega.at_log(std::log(nu) + log_scale));
  }

  LValueRecord rec;
  rec.n = n;
  rec.j = j;
  rec.method = LMethod::afe;
  rec.value = afe_prefactor(j) * sum.value();
  rec.terms_used = trunc.terms;
  rec.xi_max = trunc.xi;
  rec.tail_estimate = trunc.tail;
  return rec;
}

}  // namespace

std::string to_string(LMethod m) { return m == LMethod::afe ? "afe" : "oracle"; }

void AfeOptions::validate() const {
  if (!(tail_tolerance > 0.0)) throw ConfigError("AFE tail tolerance must be positive");
  if (max_terms < 1) throw ConfigError("AFE term cap must be at least 1");
  if (!(truncation_scale >= 1.0)) throw ConfigError("AFE truncation scale must be >= 1");
}

double l_half_oracle(std::uint64_t n, const PrimeTable& table, const HurwitzOptions& opts) {
  if (n <= 1 || n > 100'000) throw DomainError("Hurwitz oracle supports 1 < n <= 1e5");
  if (n % 4 != 1 || !is_squarefree(n, table)) {
    throw DomainError("Hurwitz oracle needs n = 1 mod 4 squarefree");
  }
  const auto nn = static_cast<std::int64_t>(n);
  const double nd = static_cast<double>(n);
  CompensatedSum sum;
  for (std::int64_t a = 1; a < nn; ++a) {
    const int chi = kronecker(nn, a);
    if (chi == 0) continue;
    sum.add(chi * hurwitz_zeta(0.5, static_cast<double>(a) / nd, opts));
  }
  return sum.value() / std::sqrt(nd);
}

void check_afe_conductor(std::uint64_t n, const PrimeTable& table) {
  if (n <= 1 || n % 8 != 1) throw DomainError("conductor must satisfy n = 1 mod 8, n > 1");
  if (!is_squarefree(n, table)) throw DomainError("conductor must be squarefree");
}

LValueRecord afe_record(int j, std::uint64_t n, const OmegaWeights& weights, const PrimeTable& table,
                        const AfeOptions& opts) {
  check_afe_conductor(n, table);
  return afe_series(j, n, weights, table, opts);
}

LValueRecord afe_series(int j, std::uint64_t n, const OmegaWeights& weights, const PrimeTable& table,
                        const AfeOptions& opts) {
  if (j < 1 || j > 3) throw DomainError("AFE power j must be 1, 2 or 3");
  if (n <= 1 || n % 8 != 1) throw DomainError("AFE series needs n = 1 mod 8, n > 1");
  const double scale = std::pow(std::numbers::pi / static_cast<double>(n), 0.5 * j);
  return weighted_sum(j, n, scale, weights, table, opts);
}

double afe_value(int j, std::uint64_t n, const OmegaWeights& weights, const PrimeTable& table,
                 const AfeOptions& opts) {
  return afe_record(j, n, weights, table, opts).value;
}

std::uint64_t afe_table_limit(int j, std::uint64_t n_max, const OmegaWeights& weights,
                              const AfeOptions& opts) {
  if (j < 1 || j > 3) throw DomainError("AFE power j must be 1, 2 or 3");
  const double reach = weights.table(j).cutoff() * opts.truncation_scale *
                       std::pow(static_cast<double>(n_max) / std::numbers::pi, 0.5 * j);
  return static_cast<std::uint64_t>(std::ceil(reach)) + 1;
}

LValueRecord a_alpha_record(std::uint64_t p, double alpha, const OmegaWeights& weights,
                            const PrimeTable& table, const AfeOptions& opts) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("A_alpha needs alpha in (0, 1]");
  if (p % 8 != 1 || !table.is_prime(p)) throw DomainError("A_alpha needs a prime p = 1 mod 8");
  const double scale = std::sqrt(std::numbers::pi / std::pow(static_cast<double>(p), alpha));
  return weighted_sum(1, p, scale, weights, table, opts);
}

double a_alpha(std::uint64_t p, double alpha, const OmegaWeights& weights, const PrimeTable& table,
               const AfeOptions& opts) {
  return a_alpha_record(p, alpha, weights, table, opts).value;
}

double resonator(std::uint64_t p, std::uint64_t cutoff, const PrimeTable& table) {
  if (cutoff < 1) throw DomainError("resonator cutoff must be >= 1");
  const auto pp = static_cast<std::int64_t>(p);
  CompensatedSum sum;
  for (std::uint64_t n = 1; n <= cutoff; ++n) {
    const int chi = kronecker(pp, static_cast<std::int64_t>(n));
    if (chi == 0) continue;
    sum.add(chi * divisor_dhalf_value(n, table) / std::sqrt(static_cast<double>(n)));
  }
  return sum.value();
}

std::vector<std::uint64_t> primes_1_mod_8(std::uint64_t lo, std::uint64_t hi, const PrimeTable& table) {
  if (hi > table.limit()) {
    throw RangeError("prime range up to " + std::to_string(hi) + " exceeds the prime table");
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : table.primes()) {
    if (p > hi) break;
    if (p > lo && p % 8 == 1) out.push_back(p);
  }
  return out;
}

CensusRecord census_from_values(std::uint64_t X, double tol, std::vector<std::uint64_t> primes,
                                std::vector<double> values) {
  if (primes.size() != values.size()) throw DomainError("census needs one value per prime");
  if (!(tol >= 0.0)) throw ConfigError("nonvanishing threshold must be >= 0");
  CensusRecord rec;
  rec.X = X;
  rec.tol = tol;
  rec.count_total = primes.size();

  constexpr double kLo = -1.0;
  constexpr double kHi = 4.0;
  constexpr double kWidth = 0.25;
  const auto inner = static_cast<std::size_t>((kHi - kLo) / kWidth);
  rec.histogram.push_back({-HUGE_VAL, kLo, 0});
  for (std::size_t b = 0; b < inner; ++b) {
    rec.histogram.push_back({kLo + kWidth * b, kLo + kWidth * (b + 1), 0});
  }
  rec.histogram.push_back({kHi, HUGE_VAL, 0});

  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) throw NumericalError("non-finite central value at p=" + std::to_string(primes[i]));
    const double a = std::abs(v);
    if (a > tol) ++rec.count_nonvanishing;
    if (a > tol && a <= 1000.0 * tol) ++rec.count_near_threshold;
    if (v < 0.0) ++rec.count_negative;
    if (i == 0 || a < rec.min_abs) {
      rec.min_abs = a;
      rec.argmin_abs = primes[i];
    }
    rec.min_value = (i == 0) ? v : std::min(rec.min_value, v);
    rec.max_value = (i == 0) ? v : std::max(rec.max_value, v);
    sum.add(v);

    std::size_t bin;
    if (v < kLo) {
      bin = 0;
    } else if (v >= kHi) {
      bin = inner + 1;
    } else {
      bin = 1 + std::min(inner - 1, static_cast<std::size_t>((v - kLo) / kWidth));
    }
    ++rec.histogram[bin].count;
  }
  if (!values.empty()) rec.mean_value = sum.value() / static_cast<double>(values.size());
  rec.primes = std::move(primes);
  rec.values = std::move(values);
  return rec;
}

CensusRecord census(std::uint64_t X, double tol, const OmegaWeights& weights, const PrimeTable& table,
                    unsigned workers, const AfeOptions& opts) {
  auto primes = primes_1_mod_8(0, X, table);
  std::vector<double> values(primes.size());
  parallel_for(primes.size(), workers,
               [&](std::size_t i) { values[i] = afe_value(1, primes[i], weights, table, opts); });
  return census_from_values(X, tol, std::move(primes), std::move(values));
}

}  // namespace qcentral
