#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcentral/errors.hpp"
#include "qcentral/mollify.hpp"

using namespace qcentral;

namespace {

const PrimeTable& table() {
  static const PrimeTable t(100'000);
  return t;
}

}  // namespace

TEST_CASE("H values") {
  const auto c = MollifierSpec::cubic(1.3, 0.7, 0.2);
  CHECK(h_value(c, 0.0) == doctest::Approx(1.3));
  CHECK(h_deriv(c, 0.0, 1) == doctest::Approx(-0.7));
  CHECK(std::abs(h_value(c, 1.0)) <= 1e-12);
  CHECK(std::abs(h_deriv(c, 1.0, 1)) <= 1e-12);
  CHECK_THROWS_AS((void)h_deriv(c, 0.5, 3), UnsupportedError);

  const auto hs = MollifierSpec::hstar(0.25);
  CHECK(h_value(hs, 0.0) == doctest::Approx(8.0).epsilon(1e-15));
  for (double x = 0.0; x <= 1.0; x += 0.125) {
    CHECK(h_value(hs, x) == doctest::Approx((1 - x) * (1 - x) * (2 + 3 / (2 * 0.25) + x)));
  }
  for (double th : {0.05, 0.1, 0.17409, 0.3, 0.45}) {
    const auto s = MollifierSpec::hstar(th);
    CHECK(std::abs(h_value(s, 1.0)) <= 1e-12);
    CHECK(std::abs(h_deriv(s, 1.0, 1)) <= 1e-12);
    // A = a_opt(B, theta)
    CHECK(h_value(s, 0.0) == doctest::Approx(a_opt(-h_deriv(s, 0.0, 1), th)).epsilon(1e-13));
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const auto s = MollifierSpec::cubic(u(rng), u(rng), 0.2);
    CHECK(std::abs(h_value(s, 1.0)) <= 1e-12 * 10);
    CHECK(std::abs(h_deriv(s, 1.0, 1)) <= 1e-12 * 10);
    // second derivative against a central difference of the first
    const double h = 1e-6;
    const double fd = (h_deriv(s, 0.4 + h, 1) - h_deriv(s, 0.4 - h, 1)) / (2 * h);
    CHECK(h_deriv(s, 0.4, 2) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(MollifierSpec::hstar(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(MollifierSpec::hstar(0.5).validate(), ConfigError);
  CHECK_THROWS_AS(MollifierSpec::hstar(0.2, 0.5).validate(), ConfigError);
  // 1 - x violates H'(1) = 0
  CHECK_THROWS_AS(MollifierSpec::polynomial({1.0, -1.0}, 0.2).validate(), ConfigError);
  CHECK_NOTHROW(MollifierSpec::polynomial({1.0, -2.0, 1.0}, 0.2).validate());
  CHECK(MollifierSpec::hstar(0.2).with_length_for(1e6).M == doctest::Approx(std::pow(1e6, 0.2)));
}

TEST_CASE("b_m and M(n)") {
  const auto s = MollifierSpec::hstar(0.2, 100.0);
  CHECK(b_m(1, s, table()) == doctest::Approx(h_value(s, 0.0)));
  CHECK(b_m(9, s, table()) == 0.0);
  CHECK(b_m(15, s, table()) == doctest::Approx(h_value(s, std::log(15.0) / std::log(100.0))));
  CHECK(b_m(3, s, table()) == doctest::Approx(-h_value(s, std::log(3.0) / std::log(100.0))));
  CHECK(b_m(101, s, table()) == 0.0);
  CHECK_THROWS_AS((void)b_m(10, s, table()), DomainError);

  const auto short_spec = MollifierSpec::hstar(0.2, 2.9);
  CHECK(mollifier_M(17, short_spec, table()) == doctest::Approx(h_value(short_spec, 0.0)));

  // against a brute-force sum with the oracle Kronecker symbol
  const Mollifier mol(s, table());
  for (std::uint64_t n : {17ULL, 41ULL, 105ULL, 1001ULL, 99'993ULL}) {
    double direct = 0.0;
    for (std::uint64_t m = 1; m <= 100; m += 2) {
      const int mu = oracle::moebius(m);
      if (mu == 0) continue;
      direct += mu * h_value(s, std::log(static_cast<double>(m)) / std::log(100.0)) *
                oracle::kronecker(static_cast<std::int64_t>(n), m) / std::sqrt(static_cast<double>(m));
    }
    CAPTURE(n);
    CHECK(mol(n) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(mollifier_M(n, s, table()) == doctest::Approx(direct).epsilon(1e-13));
  }
  // linear in H
  const auto scaled = MollifierSpec::cubic(2.0 * h_value(s, 0.0), 2.0 * -h_deriv(s, 0.0, 1), 0.2, 100.0);
  CHECK(Mollifier(scaled, table())(41) == doctest::Approx(2.0 * mol(41)).epsilon(1e-13));
}

TEST_CASE("frak I") {
  const auto c = MollifierSpec::cubic(1.0, 1.0, 0.2);
  CHECK(frak_I_quadrature(c) == doctest::Approx(frak_I(c)).epsilon(1e-9));
  CHECK(frak_I(c) == doctest::Approx(frak_I_cubic(1.0, 1.0, 0.2)).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ab(-3.0, 3.0);
  std::uniform_real_distribution<double> th(0.02, 0.49);
  for (int i = 0; i < 20; ++i) {
    const double A = ab(rng), B = ab(rng), t = th(rng);
    const auto s = MollifierSpec::cubic(A, B, t);
    const double closed = (A + B / (2 * t)) * (A + B / (2 * t)) + (3 * A * A + (2 * B - 3 * A) * (2 * B - 3 * A)) / (24 * t * t * t);
    CAPTURE(A);
    CAPTURE(B);
    CAPTURE(t);
    CHECK(std::abs(frak_I_quadrature(s) - closed) <= 1e-9 * std::max(1.0, std::abs(closed)));
    CHECK(frak_I(s) == doctest::Approx(closed).epsilon(1e-12));
    const FrakIParts q = frak_I_parts_quadrature(s);
    CHECK(q.h2_h2 == doctest::Approx(3 * A * A + (2 * B - 3 * A) * (2 * B - 3 * A)).epsilon(1e-10));
  }
  for (double t : {0.1, 0.17409, 0.3}) {
    const auto s = MollifierSpec::hstar(t);
    const double A = h_value(s, 0.0), B = -h_deriv(s, 0.0, 1);
    CHECK(frak_I_parts_exact(s).h2_h2 == doctest::Approx(3 * A * A + (2 * B - 3 * A) * (2 * B - 3 * A)).epsilon(1e-13));
  }
  // a general polynomial: exact vs quadrature
  const auto p = MollifierSpec::polynomial({1.0, -2.0, 1.0}, 0.3);  // (1 - x)^2
  const FrakIParts e = frak_I_parts_exact(p);
  CHECK(e.h_h1 == doctest::Approx(-0.5));
  CHECK(e.h1_h1 == doctest::Approx(4.0 / 3.0));
  CHECK(e.h2_h2 == doctest::Approx(4.0));
  CHECK(frak_I_quadrature(p) == doctest::Approx(frak_I(p)).epsilon(1e-10));
}

TEST_CASE("scale invariance of the proportion") {
  for (double cst : {-3.0, 0.5, 7.0}) {
    const auto s = MollifierSpec::cubic(1.2, 0.8, 0.2);
    const auto cs = MollifierSpec::cubic(1.2 * cst, 0.8 * cst, 0.2);
    CHECK(varrho(cs) == doctest::Approx(varrho(s)).epsilon(1e-9));
    const double f = first_moment_factor(s), fc = first_moment_factor(cs);
    CHECK(frak_I(cs) / (fc * fc) == doctest::Approx(frak_I(s) / (f * f)).epsilon(1e-9));
  }
}

TEST_CASE("optimization constants") {
  const double t0 = theta0();
  CHECK(std::abs(t0 - 0.17409) <= 2e-5);
  CHECK(std::abs(rho(t0) - 0.09645) <= 2e-5);
  CHECK(std::abs(theta0_quartic(t0)) <= 1e-10);
  CHECK(theta0_quartic(0.0) < 0.0);
  CHECK(theta0_quartic(0.5) > 0.0);
  CHECK(rho(1e-9) < 1e-8);
  CHECK(std::abs(rho(0.5)) <= 1e-15);
  // theta0 maximizes rho
  for (double t = 0.01; t < 0.5; t += 0.01) CHECK(rho(t) <= rho(t0) + 1e-15);
  // rho is the proportion of H* at each theta
  for (double t : {0.1, 0.17409, 0.3}) CHECK(varrho(MollifierSpec::hstar(t)) == doctest::Approx(rho(t)).epsilon(1e-12));
}
