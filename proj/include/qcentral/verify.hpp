#pragma once

// Exact-identity suites shared by the `verify` subcommand and the tests.

#include <cstdint>
#include <string>
#include <vector>

#include "qcentral/arith.hpp"
#include "qcentral/omega_table.hpp"

namespace qcentral {

struct SuiteResult {
  std::string name;
  std::uint64_t cases = 0;
  double max_error = 0.0;  // largest deviation seen, in the suite's own units
  std::uint64_t failure_count = 0;
  std::vector<std::string> failures;  // first few failing cases, described
  double seconds = 0.0;

  [[nodiscard]] bool ok() const noexcept { return failure_count == 0; }
  void fail(std::string what);
};

/// |G_k(n) - tau_bruteforce(k, n) / prefactor(n)| <= 1e-8 max(1, sqrt n) over
/// odd n <= n_max, |k| <= k_max.
[[nodiscard]] SuiteResult verify_gauss(std::uint64_t n_max, int k_max, const PrimeTable& table);

/// On `samples` random squarefree n = 1 mod 8 in (1, n_max]:
/// |D_1(n) - oracle| <= 1e-6 and |D_2(n) - D_1(n)^2| <= 1e-5.
[[nodiscard]] SuiteResult verify_afe_oracle(int samples, std::uint64_t n_max, std::uint64_t seed,
                                            const OmegaWeights& weights, const PrimeTable& table,
                                            unsigned workers = 1);

/// Vaughan's four terms sum to Lambda(n) within 1e-9 (1 + log n).
[[nodiscard]] SuiteResult verify_vaughan(std::uint64_t n_max, const std::vector<double>& Vs,
                                         const PrimeTable& table);

/// mu^2(n) = N_Y(n) + R_Y(n) exactly.
[[nodiscard]] SuiteResult verify_mu2_split(std::uint64_t n_max, const std::vector<double>& Ys,
                                           const PrimeTable& table);

/// sum_{ab = n} d_{1/2}(a) d_{1/2}(b) = 1 in exact rationals.
[[nodiscard]] SuiteResult verify_dhalf_convolution(std::uint64_t n_max, const PrimeTable& table);

/// At (X, vartheta): sum_{d | n} lambda_d >= 1 for primes n in (X/2, X],
/// >= -1e-9 for every n there, and int G'^2 in [1, 1 + 3 delta_G].
[[nodiscard]] SuiteResult verify_sieve_pointwise(std::uint64_t X, double vartheta, const PrimeTable& table,
                                                 unsigned workers = 1);

struct VerifyOptions {
  std::uint64_t gauss_n_max = 1500;
  int gauss_k_max = 20;
  int afe_samples = 200;
  std::uint64_t afe_n_max = 50'000;
  std::uint64_t seed = 20240601;
  std::uint64_t vaughan_n_max = 10'000;
  std::uint64_t mu2_n_max = 100'000;
  std::uint64_t dhalf_n_max = 10'000;
  std::uint64_t sieve_X = 1'000'000;
  double sieve_vartheta = 0.15;
  unsigned workers = 1;
};

/// Prime table limit needed by run_verify_suites.
[[nodiscard]] std::uint64_t verify_table_limit(const VerifyOptions& opts);

[[nodiscard]] std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opts, const OmegaWeights& weights,
                                                         const PrimeTable& table);

}  // namespace qcentral
