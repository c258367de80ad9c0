#include "qcentral/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcentral/errors.hpp"
#include "qcentral/summation.hpp"

namespace qcentral {

namespace {

using Poly = std::vector<double>;  // ascending

double poly_eval(const Poly& p, double x) {
  double acc = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

Poly poly_deriv(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
  return d;
}

// int_0^1 p(x) q(x) dx
double poly_inner(const Poly& p, const Poly& q) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t k = 0; k < q.size(); ++k) sum.add(p[i] * q[k] / static_cast<double>(i + k + 1));
  }
  return sum.value();
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 0.5)) throw ConfigError("theta must lie in (0, 1/2)");
}

}  // namespace

MollifierSpec MollifierSpec::cubic(double A, double B, double theta, double M) {
  MollifierSpec s;
  s.kind = HKind::cubic;
  s.A = A;
  s.B = B;
  s.theta = theta;
  s.M = M;
  return s;
}

MollifierSpec MollifierSpec::hstar(double theta, double M) {
  MollifierSpec s;
  s.kind = HKind::hstar;
  s.theta = theta;
  s.M = M;
  return s;
}

MollifierSpec MollifierSpec::polynomial(std::vector<double> coeffs, double theta, double M) {
  MollifierSpec s;
  s.kind = HKind::polynomial;
  s.coeffs = std::move(coeffs);
  s.theta = theta;
  s.M = M;
  return s;
}

MollifierSpec MollifierSpec::with_length_for(double X) const {
  if (!(X > 1.0)) throw ConfigError("mollifier length needs X > 1");
  MollifierSpec s = *this;
  s.M = std::pow(X, theta);
  return s;
}

std::vector<double> MollifierSpec::h_coefficients() const {
  switch (kind) {
    case HKind::cubic:
      return {A, -B, 2.0 * B - 3.0 * A, 2.0 * A - B};
    case HKind::hstar: {
      // (1 - x)^2 (c + x) = c + (1 - 2c) x + (c - 2) x^2 + x^3
      const double c = 2.0 + 3.0 / (2.0 * theta);
      return {c, 1.0 - 2.0 * c, c - 2.0, 1.0};
    }
    case HKind::polynomial:
      if (coeffs.empty()) return {0.0};
      return coeffs;
  }
  throw UnsupportedError("unknown H kind");
}

void MollifierSpec::validate() const {
  check_theta(theta);
  if (!(M >= 1.0)) throw ConfigError("mollifier length M must be >= 1");
  const Poly h = h_coefficients();
  double scale = 0.0;
  for (double c : h) {
    if (!std::isfinite(c)) throw ConfigError("H coefficients must be finite");
    scale = std::max(scale, std::abs(c));
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  if (std::abs(poly_eval(h, 1.0)) > tol || std::abs(poly_eval(poly_deriv(h), 1.0)) > tol) {
    throw ConfigError("H must satisfy H(1) = H'(1) = 0");
  }
}

double h_value(const MollifierSpec& spec, double x) { return poly_eval(spec.h_coefficients(), x); }

double h_deriv(const MollifierSpec& spec, double x, int order) {
  if (order < 0) throw DomainError("derivative order must be >= 0");
  if (order > 2) throw UnsupportedError("H derivatives above order 2 are not provided");
  Poly p = spec.h_coefficients();
  for (int k = 0; k < order; ++k) p = poly_deriv(p);
  return poly_eval(p, x);
}

double b_m(std::uint64_t m, const MollifierSpec& spec, const PrimeTable& table) {
  if (m < 1 || m % 2 == 0) throw DomainError("b_m is defined for odd m >= 1");
  if (static_cast<double>(m) > spec.M) return 0.0;
  if (m == 1) return h_value(spec, 0.0);
  const int mu = moebius(m, table);
  if (mu == 0) return 0.0;
  return mu * h_value(spec, std::log(static_cast<double>(m)) / std::log(spec.M));
}

Mollifier::Mollifier(const MollifierSpec& spec, const PrimeTable& table) : spec_(spec) {
  spec_.validate();
  const auto top = static_cast<std::uint64_t>(std::floor(spec_.M + 1e-9));
  if (top > table.limit()) throw RangeError("prime table does not reach the mollifier length");
  for (std::uint64_t m = 1; m <= top; m += 2) {
    const double b = b_m(m, spec_, table);
    if (b != 0.0) terms_.push_back({m, b / std::sqrt(static_cast<double>(m))});
  }
}

double Mollifier::operator()(std::uint64_t n) const {
  const auto nn = static_cast<std::int64_t>(n);
  CompensatedSum sum;
  for (const auto& [m, c] : terms_) {
    const int chi = kronecker(nn, static_cast<std::int64_t>(m));
    if (chi != 0) sum.add(chi * c);
  }
  return sum.value();
}

double mollifier_M(std::uint64_t n, const MollifierSpec& spec, const PrimeTable& table) {
  if (n % 2 == 0) throw DomainError("mollifier is evaluated at odd n");
  return Mollifier(spec, table)(n);
}

FrakIParts frak_I_parts_quadrature(const MollifierSpec& spec) {
  using boost::math::quadrature::gauss_kronrod;
  const auto integrate = [&](int a, int b) {
    const auto f = [&](double x) { return h_deriv(spec, x, a) * h_deriv(spec, x, b); };
    return gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 10, 1e-14);
  };
  return {integrate(0, 1), integrate(0, 2), integrate(1, 1), integrate(1, 2), integrate(2, 2)};
}

FrakIParts frak_I_parts_exact(const MollifierSpec& spec) {
  const Poly h0 = spec.h_coefficients();
  const Poly h1 = poly_deriv(h0);
  const Poly h2 = poly_deriv(h1);
  return {poly_inner(h0, h1), poly_inner(h0, h2), poly_inner(h1, h1), poly_inner(h1, h2),
          poly_inner(h2, h2)};
}

double frak_I_combine(const FrakIParts& p, double theta) {
  check_theta(theta);
  CompensatedSum sum;
  sum.add(-2.0 * p.h_h1);
  sum.add(p.h_h2 / theta);
  sum.add(p.h1_h1 / theta);
  sum.add(-p.h1_h2 / (2.0 * theta * theta));
  sum.add(p.h2_h2 / (24.0 * theta * theta * theta));
  return sum.value();
}

double frak_I_quadrature(const MollifierSpec& spec) {
  return frak_I_combine(frak_I_parts_quadrature(spec), spec.theta);
}

double frak_I(const MollifierSpec& spec) { return frak_I_combine(frak_I_parts_exact(spec), spec.theta); }

double frak_I_cubic(double A, double B, double theta) {
  check_theta(theta);
  const double head = A + B / (2.0 * theta);
  const double tail = 3.0 * A * A + (2.0 * B - 3.0 * A) * (2.0 * B - 3.0 * A);
  return head * head + tail / (24.0 * theta * theta * theta);
}

double first_moment_factor(const MollifierSpec& spec) {
  check_theta(spec.theta);
  return h_value(spec, 0.0) - h_deriv(spec, 0.0, 1) / (2.0 * spec.theta);
}

double varrho(const MollifierSpec& spec) {
  const double f = first_moment_factor(spec);
  return 0.5 * (0.5 - spec.theta) * f * f / frak_I(spec);
}

double a_opt(double B, double theta) { return B * (4.0 * theta + 3.0) / (6.0 * (theta + 1.0)); }

double rho(double theta) {
  if (!(theta >= 0.0 && theta <= 0.5)) throw DomainError("rho is defined for theta in [0, 1/2]");
  const double q = 1.0 + 2.0 * theta;
  return 0.5 * (0.5 - theta) * (1.0 - 1.0 / (q * q * q));
}

double theta0_quartic(double t) { return (((16.0 * t + 32.0) * t + 24.0) * t + 12.0) * t - 3.0; }

double theta0() {
  double lo = 0.0;
  double hi = 0.5;
  if (!(theta0_quartic(lo) < 0.0 && theta0_quartic(hi) > 0.0)) {
    throw NumericalError("theta0 bracket does not straddle a sign change");
  }
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (theta0_quartic(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qcentral
