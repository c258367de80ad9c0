#include "qcentral/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "qcentral/errors.hpp"
#include "qcentral/gauss.hpp"
#include "qcentral/lcentral.hpp"
#include "qcentral/parallel.hpp"
#include "qcentral/sieve.hpp"

namespace qcentral {

namespace {

constexpr std::size_t kListedFailures = 20;

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

void SuiteResult::fail(std::string what) {
  ++failure_count;
  if (failures.size() < kListedFailures) failures.push_back(std::move(what));
}

SuiteResult verify_gauss(std::uint64_t n_max, int k_max, const PrimeTable& table) {
  const Timer timer;
  SuiteResult r;
  r.name = "gauss";
  for (std::uint64_t n = 1; n <= n_max; n += 2) {
    const double tol = 1e-8 * std::max(1.0, std::sqrt(static_cast<double>(n)));
    const GaussValue pre = tau_prefactor(n);
    for (std::int64_t k = -k_max; k <= k_max; ++k) {
      const double err = std::abs(gauss_G(k, n, table) - tau_bruteforce(k, n) / pre);
      ++r.cases;
      r.max_error = std::max(r.max_error, err / std::max(1.0, std::sqrt(static_cast<double>(n))));
      if (!(err <= tol)) r.fail(fmt("G_%lld(%llu): error %.3g", static_cast<long long>(k),
                                    static_cast<unsigned long long>(n), err));
    }
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult verify_afe_oracle(int samples, std::uint64_t n_max, std::uint64_t seed, const OmegaWeights& weights,
                              const PrimeTable& table, unsigned workers) {
  const Timer timer;
  SuiteResult r;
  r.name = "afe_oracle";
  if (n_max < 17) throw ConfigError("AFE sample range must reach 17");
  std::vector<std::uint64_t> pool;
  for (std::uint64_t n = 17; n <= n_max; n += 8) {
    if (is_squarefree(n, table)) pool.push_back(n);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> picks;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < samples; ++i) picks.push_back(pool[pick(rng)]);

  std::vector<double> d1(picks.size()), d2(picks.size()), oracle(picks.size());
  parallel_for(picks.size(), workers, [&](std::size_t i) {
    d1[i] = afe_value(1, picks[i], weights, table);
    d2[i] = afe_value(2, picks[i], weights, table);
    oracle[i] = l_half_oracle(picks[i], table);
  });
  for (std::size_t i = 0; i < picks.size(); ++i) {
    const auto n = static_cast<unsigned long long>(picks[i]);
    const double e1 = std::abs(d1[i] - oracle[i]);
    const double e2 = std::abs(d2[i] - d1[i] * d1[i]);
    r.cases += 2;
    r.max_error = std::max({r.max_error, e1, e2});
    if (!(e1 <= 1e-6)) r.fail(fmt("D_1(%llu) vs oracle: error %.3g", n, e1));
    if (!(e2 <= 1e-5)) r.fail(fmt("D_2(%llu) vs D_1^2: error %.3g", n, e2));
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult verify_vaughan(std::uint64_t n_max, const std::vector<double>& Vs, const PrimeTable& table) {
  const Timer timer;
  SuiteResult r;
  r.name = "vaughan";
  for (double V : Vs) {
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      const double lam = von_mangoldt(n, table);
      const double err = std::abs(vaughan_decompose(n, V, table).sum() - lam);
      const double tol = 1e-9 * (1.0 + std::log(static_cast<double>(n)));
      ++r.cases;
      r.max_error = std::max(r.max_error, err);
      if (!(err <= tol)) r.fail(fmt("V=%g n=%llu: error %.3g", V, static_cast<unsigned long long>(n), err));
    }
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult verify_mu2_split(std::uint64_t n_max, const std::vector<double>& Ys, const PrimeTable& table) {
  const Timer timer;
  SuiteResult r;
  r.name = "mu2_split";
  for (double Y : Ys) {
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      const int mu2 = is_squarefree(n, table) ? 1 : 0;
      const int split = n_y(n, Y, table) + r_y(n, Y, table);
      ++r.cases;
      if (split != mu2) {
        r.max_error = std::max(r.max_error, static_cast<double>(std::abs(split - mu2)));
        r.fail(fmt("Y=%g n=%llu: N_Y + R_Y = %d, mu^2 = %d", Y, static_cast<unsigned long long>(n), split, mu2));
      }
    }
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult verify_dhalf_convolution(std::uint64_t n_max, const PrimeTable& table) {
  const Timer timer;
  SuiteResult r;
  r.name = "dhalf_convolution";
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    Rational total = 0;
    for (std::uint64_t a : divisors(table.factorize(n))) {
      total += divisor_dhalf(a, table) * divisor_dhalf(n / a, table);
    }
    ++r.cases;
    if (total != 1) {
      r.max_error = std::max(r.max_error, std::abs(static_cast<double>(total) - 1.0));
      r.fail(fmt("n=%llu: convolution = %s", static_cast<unsigned long long>(n), total.str().c_str()));
    }
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult verify_sieve_pointwise(std::uint64_t X, double vartheta, const PrimeTable& table, unsigned workers) {
  const Timer timer;
  SuiteResult r;
  r.name = "sieve_pointwise";
  const SieveParams params = SieveParams::make(X, vartheta);
  const LambdaTable lambda = build_lambda(params, table, workers);

  const std::uint64_t lo = X / 2 + 1;
  std::vector<double> sums(X - lo + 1);
  parallel_for(sums.size(), workers, [&](std::size_t i) { sums[i] = sieve_sum(lo + i, lambda, table); });
  double worst_prime = HUGE_VAL;
  double worst_any = HUGE_VAL;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const std::uint64_t n = lo + i;
    const auto nn = static_cast<unsigned long long>(n);
    ++r.cases;
    worst_any = std::min(worst_any, sums[i]);
    if (!(sums[i] >= -1e-9)) r.fail(fmt("n=%llu: sieve sum %.17g < 0", nn, sums[i]));
    if (table.is_prime(n)) {
      worst_prime = std::min(worst_prime, sums[i]);
      if (!(sums[i] >= 1.0)) r.fail(fmt("prime %llu: sieve sum %.17g < 1", nn, sums[i]));
    }
  }
  const double energy = selberg_g_energy(params.delta_G, params.mode);
  ++r.cases;
  if (!(energy >= 1.0 && energy <= 1.0 + 3.0 * params.delta_G)) {
    r.fail(fmt("int G'^2 = %.17g outside [1, 1 + 3 delta_G], delta_G = %g", energy, params.delta_G));
  }
  // Shortfall below the required floor; 0 when all hold.
  r.max_error = std::max({0.0, 1.0 - worst_prime, -worst_any});
  r.seconds = timer.seconds();
  return r;
}

std::uint64_t verify_table_limit(const VerifyOptions& opts) {
  return std::max({opts.gauss_n_max, opts.afe_n_max, opts.vaughan_n_max, opts.mu2_n_max, opts.dhalf_n_max,
                   opts.sieve_X, std::uint64_t{1000}});
}

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opts, const OmegaWeights& weights,
                                           const PrimeTable& table) {
  std::vector<SuiteResult> out;
  out.push_back(verify_gauss(opts.gauss_n_max, opts.gauss_k_max, table));
  out.push_back(verify_afe_oracle(opts.afe_samples, opts.afe_n_max, opts.seed, weights, table, opts.workers));
  out.push_back(verify_vaughan(opts.vaughan_n_max, {3.0, 10.0, 50.0}, table));
  out.push_back(verify_mu2_split(opts.mu2_n_max, {1.0, 10.0, 316.0}, table));
  out.push_back(verify_dhalf_convolution(opts.dhalf_n_max, table));
  out.push_back(verify_sieve_pointwise(opts.sieve_X, opts.sieve_vartheta, table, opts.workers));
  return out;
}

}  // namespace qcentral
