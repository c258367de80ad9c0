#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qcentral/errors.hpp"
#include "qcentral/lcentral.hpp"
#include "qcentral/verify.hpp"

using namespace qcentral;

namespace {

const OmegaWeights& weights() { return OmegaWeights::standard(); }

const PrimeTable& table() {
  static const PrimeTable t(std::max({std::uint64_t{1'000'000}, afe_table_limit(2, 50'000, weights()),
                                     afe_table_limit(3, 3000, weights())}));
  return t;
}

}  // namespace

TEST_CASE("Hurwitz oracle") {
  const double a = l_half_oracle(17, table(), HurwitzOptions{10, 8});
  const double b = l_half_oracle(17, table(), HurwitzOptions{30, 10});
  CHECK(std::abs(a - b) <= 1e-8);
  CHECK(std::isfinite(a));

  // n = 5 against the partial sums of sum (5/k) k^{-1/2}, averaged over the
  // last period to damp the oscillation
  double partial = 0.0;
  double avg = 0.0;
  const std::uint64_t N = 1'000'000;
  for (std::uint64_t k = 1; k <= N; ++k) {
    partial += oracle::kronecker(5, k) / std::sqrt(static_cast<double>(k));
    if (k > N - 5) avg += partial / 5.0;
  }
  CHECK(std::abs(l_half_oracle(5, table()) - avg) <= 1e-2);

  CHECK_THROWS_AS((void)l_half_oracle(9, table()), DomainError);   // 9 not squarefree
  CHECK_THROWS_AS((void)l_half_oracle(15, table()), DomainError);  // 15 = 3 mod 4
  CHECK_THROWS_AS((void)l_half_oracle(100'001, table()), DomainError);
}

TEST_CASE("AFE examples") {
  const double d17 = afe_value(1, 17, weights(), table());
  CHECK(std::abs(d17 - l_half_oracle(17, table())) <= 1e-6);
  const double d33 = afe_value(1, 33, weights(), table());
  CHECK(std::abs(afe_value(2, 33, weights(), table()) - d33 * d33) <= 1e-5);

  AfeOptions doubled;
  doubled.truncation_scale = 2.0;
  CHECK(std::abs(afe_value(1, 17, weights(), table(), doubled) - d17) < 1e-9);

  const auto rec = afe_record(1, 17, weights(), table());
  CHECK(rec.terms_used >= 1);
  CHECK(rec.tail_estimate <= 1e-9);
  CHECK(rec.method == LMethod::afe);

  CHECK_THROWS_AS((void)afe_value(1, 9 * 17, weights(), table()), DomainError);
  CHECK_THROWS_AS((void)afe_value(1, 13, weights(), table()), DomainError);
  CHECK_THROWS_AS((void)afe_value(1, 1, weights(), table()), DomainError);
  CHECK_THROWS_AS((void)afe_value(4, 17, weights(), table()), DomainError);
  const PrimeTable tiny(20);
  CHECK_THROWS_AS((void)afe_value(1, 10'009, weights(), tiny), RangeError);
}

TEST_CASE("AFE vs oracle on a random sample") {
  const SuiteResult r = verify_afe_oracle(40, 50'000, 99, weights(), table());
  for (const auto& f : r.failures) MESSAGE(f);
  CHECK(r.ok());
  CHECK(r.max_error <= 1e-6);
}

TEST_CASE("D_3 = D_1^3 for n <= 3000") {
  std::mt19937_64 rng(5);
  std::vector<std::uint64_t> pool;
  for (std::uint64_t n = 17; n <= 3000; n += 8) {
    if (oracle::moebius(n) != 0) pool.push_back(n);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(25);
  pool.push_back(2993);  // = 41 * 73, near the top of the range
  for (std::uint64_t n : pool) {
    const double d1 = afe_value(1, n, weights(), table());
    CAPTURE(n);
    CHECK(std::abs(afe_value(3, n, weights(), table()) - d1 * d1 * d1) <= 1e-4);
  }
}

TEST_CASE("j = 3 beyond the default term cap") {
  CHECK_THROWS_AS((void)afe_value(3, 10'009, weights(), table()), NumericalError);
}

TEST_CASE("A_alpha") {
  const double d17 = afe_value(1, 17, weights(), table());
  CHECK(std::abs(a_alpha(17, 1.0, weights(), table()) - d17) <= 1e-9);

  std::uint64_t p = 10'001;
  while (!(p % 8 == 1 && table().is_prime(p))) ++p;
  const double a1 = a_alpha(p, 1.0, weights(), table());
  const double a99 = a_alpha(p, 0.99, weights(), table());
  const double gap = std::abs(a99 - a1) / std::abs(a1);
  MESSAGE("p = " << p << ", A_1 = " << a1 << ", A_0.99 = " << a99 << ", relative gap " << gap);
  CHECK(gap <= 0.05);

  CHECK_THROWS_AS((void)a_alpha(17, 0.0, weights(), table()), DomainError);
  CHECK_THROWS_AS((void)a_alpha(17, 1.5, weights(), table()), DomainError);
  CHECK_THROWS_AS((void)a_alpha(33, 1.0, weights(), table()), DomainError);
}

TEST_CASE("resonator") {
  CHECK(resonator(17, 1, table()) == 1.0);
  // all n <= 3: (17/2) = 1 and (17/3) = -1
  const double expect = 1.0 + 0.5 / std::sqrt(2.0) - 0.5 / std::sqrt(3.0);
  CHECK(resonator(17, 3, table()) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(expect == doctest::Approx(1.064878255998461).epsilon(1e-14));
  // longer cutoff against a direct sum with the oracle Kronecker symbol
  double direct = 0.0;
  for (std::uint64_t n = 1; n <= 500; ++n) {
    double dh = 1.0;
    for (auto [q, e] : oracle::factor(n)) {
      // d_{1/2}(q^e) = binom(2e, e) / 4^e
      double c = 1.0;
      for (int i = 1; i <= e; ++i) c *= (2.0 * e - i + 1) / (4.0 * i);
      dh *= c;
    }
    direct += dh * oracle::kronecker(41, n) / std::sqrt(static_cast<double>(n));
  }
  CHECK(resonator(41, 500, table()) == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS((void)resonator(17, 0, table()), DomainError);
}

TEST_CASE("census") {
  const CensusRecord rec = census(100, 1e-8, weights(), table(), 1);
  CHECK(rec.primes == std::vector<std::uint64_t>{17, 41, 73, 89, 97});
  CHECK(rec.count_total == 5);
  CHECK(rec.count_nonvanishing <= rec.count_total);

  std::uint64_t binned = 0;
  for (const auto& b : rec.histogram) binned += b.count;
  CHECK(binned == rec.count_total);

  const CensusRecord synth =
      census_from_values(100, 1e-3, {17, 41, 73, 89}, {-2.0, 5e-4, 0.5, 4.5});
  CHECK(synth.count_nonvanishing == 3);
  CHECK(synth.count_near_threshold == 1);  // 0.5 <= 1000 tol
  CHECK(synth.count_negative == 1);
  CHECK(synth.argmin_abs == 41);
  CHECK(synth.histogram.front().count == 1);
  CHECK(synth.histogram.back().count == 1);
  CHECK(synth.proportion() == 0.75);
  CHECK_THROWS_AS((void)census_from_values(100, 1e-3, {17}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS((void)census_from_values(100, 1e-3, {17}, {NAN}), NumericalError);
}

TEST_CASE("census is bit-identical across worker counts") {
  const CensusRecord one = census(100'000, 1e-8, weights(), table(), 1);
  for (unsigned w : {4u, 8u}) {
    const CensusRecord many = census(100'000, 1e-8, weights(), table(), w);
    CHECK(many.primes == one.primes);
    CHECK(std::memcmp(many.values.data(), one.values.data(), one.values.size() * sizeof(double)) == 0);
    CHECK(std::bit_cast<std::uint64_t>(many.mean_value) == std::bit_cast<std::uint64_t>(one.mean_value));
  }
}
