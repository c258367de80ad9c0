#pragma once

// Central values L(1/2, chi_n) for the real character chi_n = (n/.) with
// n = 1 mod 8 squarefree, through the smoothed approximate functional
// equation
//
//   L(1/2, chi_n)^j = 2/(1 - 1/sqrt 2)^{2j}
//                     sum_{nu odd} chi_n(nu) d_j(nu) nu^{-1/2} omega_j(nu (pi/n)^{j/2}),
//
// plus a Hurwitz zeta oracle, the generalized A_alpha(p), the resonator and
// a census over primes p = 1 mod 8.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcentral/arith.hpp"
#include "qcentral/omega_table.hpp"

namespace qcentral {

enum class LMethod { afe, oracle };

[[nodiscard]] std::string to_string(LMethod m);

struct LValueRecord {
  std::uint64_t n = 0;
  double value = 0.0;
  int j = 1;
  LMethod method = LMethod::afe;
  std::uint64_t terms_used = 0;  // largest nu summed
  double xi_max = 0.0;           // omega argument at the truncation point
  double tail_estimate = 0.0;    // bound-style estimate of the dropped tail
};

struct AfeOptions {
  double tail_tolerance = 1e-9;
  std::uint64_t max_terms = 10'000'000;
  double truncation_scale = 1.0;  // multiplies the truncation point; for audits

  void validate() const;
};

/// n^{-1/2} sum_{a <= n} chi_n(a) zeta(1/2, a/n). O(n) Hurwitz calls.
[[nodiscard]] double l_half_oracle(std::uint64_t n, const PrimeTable& table,
                                   const HurwitzOptions& opts = {});

/// Throws DomainError unless n = 1 mod 8, squarefree and n > 1.
void check_afe_conductor(std::uint64_t n, const PrimeTable& table);

/// L(1/2, chi_n)^j for j = 1, 2, 3. The prime table must cover the largest
/// nu summed (RangeError otherwise).
[[nodiscard]] LValueRecord afe_record(int j, std::uint64_t n, const OmegaWeights& weights,
                                      const PrimeTable& table, const AfeOptions& opts = {});
[[nodiscard]] double afe_value(int j, std::uint64_t n, const OmegaWeights& weights,
                               const PrimeTable& table, const AfeOptions& opts = {});

/// The same series for any n = 1 mod 8, n > 1, squarefree or not. It equals
/// L(1/2, chi_n)^j only for squarefree n.
[[nodiscard]] LValueRecord afe_series(int j, std::uint64_t n, const OmegaWeights& weights,
                                      const PrimeTable& table, const AfeOptions& opts = {});

/// Largest nu the j series can reach for conductors up to n_max; a prime
/// table of this size covers every afe_* call at that scale.
[[nodiscard]] std::uint64_t afe_table_limit(int j, std::uint64_t n_max, const OmegaWeights& weights,
                                            const AfeOptions& opts = {});

/// A_alpha(p): the j = 1 sum with omega_1(nu sqrt(pi / p^alpha)), alpha in (0, 1].
[[nodiscard]] LValueRecord a_alpha_record(std::uint64_t p, double alpha, const OmegaWeights& weights,
                                          const PrimeTable& table, const AfeOptions& opts = {});
[[nodiscard]] double a_alpha(std::uint64_t p, double alpha, const OmegaWeights& weights,
                             const PrimeTable& table, const AfeOptions& opts = {});

/// R(p) = sum_{n <= cutoff} d_{1/2}(n) (p/n) / sqrt n.
[[nodiscard]] double resonator(std::uint64_t p, std::uint64_t cutoff, const PrimeTable& table);

/// Primes p = 1 mod 8 with lo < p <= hi, ascending.
[[nodiscard]] std::vector<std::uint64_t> primes_1_mod_8(std::uint64_t lo, std::uint64_t hi,
                                                        const PrimeTable& table);

struct HistogramBin {
  double lo;
  double hi;
  std::uint64_t count;
};

struct CensusRecord {
  std::uint64_t X = 0;
  double tol = 0.0;
  std::uint64_t count_total = 0;
  std::uint64_t count_nonvanishing = 0;
  std::uint64_t count_near_threshold = 0;  // tol < |L| <= 1000 tol
  std::uint64_t count_negative = 0;
  double min_abs = 0.0;
  std::uint64_t argmin_abs = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  double mean_value = 0.0;
  std::vector<HistogramBin> histogram;  // first and last bins are open-ended
  std::vector<std::uint64_t> primes;
  std::vector<double> values;

  [[nodiscard]] double proportion() const noexcept {
    return count_total == 0 ? 0.0
                            : static_cast<double>(count_nonvanishing) / static_cast<double>(count_total);
  }
};

/// Summarizes precomputed values, in the given (ascending prime) order.
[[nodiscard]] CensusRecord census_from_values(std::uint64_t X, double tol,
                                              std::vector<std::uint64_t> primes,
                                              std::vector<double> values);

/// Evaluates L(1/2, chi_p) for every prime p = 1 mod 8 up to X on `workers`
/// threads. Results do not depend on the worker count.
[[nodiscard]] CensusRecord census(std::uint64_t X, double tol, const OmegaWeights& weights,
                                  const PrimeTable& table, unsigned workers,
                                  const AfeOptions& opts = {});

}  // namespace qcentral
