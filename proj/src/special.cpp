#include "qcentral/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qcentral/errors.hpp"

namespace qcentral {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Lanczos, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(w + 1) for Re w >= 0.
cplx log_gamma_shifted(cplx w) {
  cplx x = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) x += kLanczos[k] / (w + static_cast<double>(k));
  const cplx t = w + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (w + 0.5) * std::log(t) - t + std::log(x);
}

double log_gamma_quarter() {
  static const double value = std::lgamma(0.25);
  return value;
}

// log of the omega_j integrand without the xi^{-s} factor.
cplx omega_log_kernel(int j, cplx s) {
  const cplx w = std::exp((s - 0.5) * std::numbers::ln2);
  const cplx one_minus = 1.0 - w;
  const double jd = static_cast<double>(j);
  return jd * (log_gamma(s / 2.0 + 0.25) - log_gamma_quarter()) + jd * std::log(one_minus) -
         std::log(s);
}

}  // namespace

cplx log_gamma(cplx z) {
  if (!(z.real() > 0.0)) throw DomainError("log_gamma implemented for Re z > 0 only");
  return log_gamma_shifted(z) - std::log(z);
}

void OmegaWeight::validate() const {
  if (j < 1 || j > 3) throw ConfigError("omega weight index j must be 1, 2 or 3");
  if (!(c > 0.0)) throw ConfigError("omega contour abscissa must be positive");
  if (!(T >= 50.0)) throw ConfigError("omega truncation height must be >= 50");
  if (!(h > 0.0 && h <= 0.05)) throw ConfigError("omega quadrature step must lie in (0, 0.05]");
}

double omega_decay_envelope(int j, double xi) {
  return std::pow(xi / 2.0, 3.0) * std::exp(-0.25 * std::pow(xi, 2.0 / j));
}

OmegaQuadrature omega_quadrature(const OmegaWeight& w, double xi) {
  w.validate();
  if (!(xi > 0.0)) throw DomainError("omega_j needs xi > 0");

  OmegaQuadrature out;
  double c = w.c;
  if (xi >= 4.0 * w.j + 10.0) {
    if (omega_decay_envelope(w.j, xi) < 1e-15) {
      out.short_circuit = true;
      out.contour = c;
      return out;
    }
    // saddle of |Gamma(s/2+1/4)^j 2^{js} xi^{-s}| along the real axis
    c = std::max(c, 0.5 * std::pow(xi, 2.0 / w.j) - 0.5);
  }
  out.contour = c;

  const double log_xi = std::log(xi);
  const auto K = static_cast<long>(std::floor(w.T / w.h));
  cplx fine = 0.0;
  cplx coarse = 0.0;
  double l1 = 0.0;
  for (long k = -K; k <= K; ++k) {
    const cplx s(c, static_cast<double>(k) * w.h);
    const cplx f = std::exp(omega_log_kernel(w.j, s) - s * log_xi);
    fine += f;
    if (k % 2 == 0) coarse += f;
    l1 += std::abs(f);
  }
  const double scale = w.h / (2.0 * kPi);
  fine *= scale;
  coarse *= 2.0 * scale;
  out.value = fine.real();
  out.imag_residue = fine.imag();
  out.l1_mass = l1 * scale;
  out.refinement_delta = std::abs(fine.real() - coarse.real());
  if (out.refinement_delta > 1e-10 * out.l1_mass + 1e-8 * std::abs(out.value) + 1e-300) {
    throw NumericalError("omega quadrature did not settle under step refinement at xi=" +
                         std::to_string(xi));
  }
  return out;
}

double omega(const OmegaWeight& w, double xi) { return omega_quadrature(w, xi).value; }

double omega_series1(double xi) {
  using Big = boost::multiprecision::cpp_bin_float_100;
  if (!(xi > 0.0) || xi > 30.0) throw DomainError("omega_series1 needs 0 < xi <= 30");
  // |term_{k+1} / term_k| ~ xi^2 / (k+1): terms shrink only once k > xi^2.
  if (xi * xi >= 200.0) {
    throw NumericalError("omega_series1: terms still growing after 200 terms");
  }
  static const Big gamma_quarter = boost::math::tgamma(Big(0.25));
  const Big x(xi);
  const Big x2 = x * x;
  Big power = boost::multiprecision::sqrt(x);  // xi^{1/2 + 2k}
  Big inv_factorial = 1;
  Big two_power = Big(1) / 2;  // 2^{-1-2k}
  Big sum = 0;
  for (int k = 0; k < 4000; ++k) {
    const Big sign = (k % 2 == 0) ? Big(1) : Big(-1);
    const Big term = -2 / gamma_quarter * sign * inv_factorial * (1 - two_power) * power /
                     (Big(0.5) + 2 * k);
    sum += term;
    if (k > xi * xi && boost::multiprecision::abs(term) < Big(1e-40)) break;
    power *= x2;
    inv_factorial /= (k + 1);
    two_power /= 4;
  }
  const Big head = 1 - 1 / boost::multiprecision::sqrt(Big(2));
  return static_cast<double>(head + sum);
}

double smooth_step(double y) noexcept {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  // e^{-1/y} / (e^{-1/y} + e^{-1/(1-y)})
  const double d = 1.0 / y - 1.0 / (1.0 - y);
  if (d > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(d));
}

BumpPhi BumpPhi::for_scale(double X) {
  if (!(X > 1.0)) throw ConfigError("bump scale needs X > 1");
  return BumpPhi{std::clamp(1.0 / std::log(X), 0.01, 0.2)};
}

void BumpPhi::validate() const {
  if (!(width > 0.0 && width < 0.25)) throw ConfigError("bump transition width must lie in (0, 1/4)");
}

double bump_value(const BumpPhi& phi, double x) {
  return smooth_step((x - 0.5) / phi.width) * smooth_step((1.0 - x) / phi.width);
}

double bump_mass(const BumpPhi& phi) {
  phi.validate();
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double x) { return bump_value(phi, x); };
  // Split at the plateau edges so each piece is smooth on its own.
  const double a = 0.5 + phi.width;
  const double b = 1.0 - phi.width;
  return gauss_kronrod<double, 61>::integrate(f, 0.5, a, 15, 1e-14) + (b - a) +
         gauss_kronrod<double, 61>::integrate(f, b, 1.0, 15, 1e-14);
}

namespace {

constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,     1.0 / 42.0,  -1.0 / 30.0,        5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

}  // namespace

double hurwitz_zeta(double s, double a, const HurwitzOptions& opts) {
  if (s == 1.0) throw DomainError("hurwitz_zeta has a pole at s = 1");
  if (!(s > 0.0 && s <= 4.0)) throw DomainError("hurwitz_zeta supports s in (0,1) U (1,4]");
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("hurwitz_zeta supports a in (0,1]");
  if (opts.shift < 1 || opts.bernoulli_terms < 1 ||
      opts.bernoulli_terms > static_cast<int>(kBernoulli.size())) {
    throw ConfigError("invalid Euler-Maclaurin settings");
  }

  double head = 0.0;
  for (int k = opts.shift - 1; k >= 0; --k) head += std::pow(a + k, -s);
  const double x = a + opts.shift;
  const double x_s = std::pow(x, -s);
  double tail = x * x_s / (s - 1.0) + 0.5 * x_s;

  // B_{2m}/(2m)! s(s+1)...(s+2m-2) x^{-s-2m+1}
  double rising = s;
  double factorial = 2.0;
  double x_pow = x_s / x;
  const double inv_x2 = 1.0 / (x * x);
  for (int m = 1; m <= opts.bernoulli_terms; ++m) {
    tail += kBernoulli[m - 1] / factorial * rising * x_pow;
    rising *= (s + 2 * m - 1) * (s + 2 * m);
    factorial *= (2.0 * m + 1) * (2.0 * m + 2);
    x_pow *= inv_x2;
  }
  return head + tail;
}

double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

}  // namespace qcentral
