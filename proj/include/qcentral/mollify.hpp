#pragma once

// Mollifier M(n) = sum_{m <= M, m odd} b_m chi_n(m) / sqrt(m) with
// b_m = mu(m) H(log m / log M), the quadratic functional
//
//   I[H] = -2 int H H' + (1/theta) int H H'' + (1/theta) int H'^2
//          - (1/(2 theta^2)) int H' H'' + (1/(24 theta^3)) int H''^2   (over [0, 1])
//
// and the resulting proportion rho(theta) with its maximizer theta0.

#include <cstdint>
#include <vector>

#include "qcentral/arith.hpp"

namespace qcentral {

enum class HKind { cubic, hstar, polynomial };

struct MollifierSpec {
  double theta = 0.17409;
  double M = 1.0;  // mollifier length; X^theta unless overridden
  HKind kind = HKind::hstar;
  double A = 1.0;  // cubic: H(0)
  double B = 1.0;  // cubic: -H'(0)
  std::vector<double> coeffs;  // polynomial: ascending powers of x

  [[nodiscard]] static MollifierSpec cubic(double A, double B, double theta, double M = 1.0);
  [[nodiscard]] static MollifierSpec hstar(double theta, double M = 1.0);
  [[nodiscard]] static MollifierSpec polynomial(std::vector<double> coeffs, double theta, double M = 1.0);
  /// Same H, length X^theta.
  [[nodiscard]] MollifierSpec with_length_for(double X) const;

  /// Ascending coefficients of H on [0, 1].
  [[nodiscard]] std::vector<double> h_coefficients() const;
  /// Throws ConfigError unless theta in (0, 1/2), M >= 1 and H(1) = H'(1) = 0
  /// to 1e-12 relative to the coefficient scale.
  void validate() const;
};

[[nodiscard]] double h_value(const MollifierSpec& spec, double x);
/// order 0, 1 or 2; higher orders throw UnsupportedError.
[[nodiscard]] double h_deriv(const MollifierSpec& spec, double x, int order);

/// mu(m) H(log m / log M) for odd m <= M, else 0.
[[nodiscard]] double b_m(std::uint64_t m, const MollifierSpec& spec, const PrimeTable& table);

// The coefficients b_m / sqrt(m) for m <= M, precomputed once per spec.
class Mollifier {
 public:
  Mollifier(const MollifierSpec& spec, const PrimeTable& table);

  [[nodiscard]] double operator()(std::uint64_t n) const;
  [[nodiscard]] const MollifierSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::size_t length() const noexcept { return terms_.size(); }

 private:
  MollifierSpec spec_;
  std::vector<std::pair<std::uint64_t, double>> terms_;  // (m, b_m / sqrt m), b_m != 0
};

[[nodiscard]] double mollifier_M(std::uint64_t n, const MollifierSpec& spec, const PrimeTable& table);

struct FrakIParts {
  double h_h1;   // int H H'
  double h_h2;   // int H H''
  double h1_h1;  // int H'^2
  double h1_h2;  // int H' H''
  double h2_h2;  // int H''^2
};

/// The five integrals by adaptive Gauss-Kronrod quadrature.
[[nodiscard]] FrakIParts frak_I_parts_quadrature(const MollifierSpec& spec);
/// The five integrals by exact polynomial integration.
[[nodiscard]] FrakIParts frak_I_parts_exact(const MollifierSpec& spec);
[[nodiscard]] double frak_I_combine(const FrakIParts& parts, double theta);

[[nodiscard]] double frak_I_quadrature(const MollifierSpec& spec);
[[nodiscard]] double frak_I(const MollifierSpec& spec);
/// (A + B/(2 theta))^2 + (3A^2 + (2B - 3A)^2) / (24 theta^3).
[[nodiscard]] double frak_I_cubic(double A, double B, double theta);

/// H(0) - H'(0) / (2 theta), the first-moment factor.
[[nodiscard]] double first_moment_factor(const MollifierSpec& spec);

/// (1/2)(1/2 - theta) (H(0) - H'(0)/(2 theta))^2 / I[H].
[[nodiscard]] double varrho(const MollifierSpec& spec);

[[nodiscard]] double a_opt(double B, double theta);
/// (1/2)(1/2 - theta)(1 - (1 + 2 theta)^{-3}).
[[nodiscard]] double rho(double theta);
[[nodiscard]] double theta0_quartic(double theta);
/// Positive root of 16t^4 + 32t^3 + 24t^2 + 12t - 3 by bisection on (0, 1/2).
[[nodiscard]] double theta0();

}  // namespace qcentral
