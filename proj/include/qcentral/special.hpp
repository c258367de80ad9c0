#pragma once

// Special functions for central-value work:
//
//   omega_j(xi) = 1/(2 pi i) int_(c) [Gamma(s/2+1/4)/Gamma(1/4)]^j
//                 (1 - 2^{s-1/2})^j xi^{-s} ds/s,        j = 1, 2, 3
//
// evaluated by trapezoid quadrature on a vertical line, an independent
// residue series for j = 1, the smooth bump Phi, and the Hurwitz zeta
// function used by the central-value oracle.

#include <complex>
#include <cstdint>

namespace qcentral {

/// log Gamma(z) for Re z > 0 (any branch; callers exponentiate).
[[nodiscard]] std::complex<double> log_gamma(std::complex<double> z);

struct OmegaWeight {
  int j = 1;
  double c = 1.5;    // contour abscissa
  double T = 200.0;  // truncation height |Im s| <= T
  double h = 0.01;   // trapezoid step

  void validate() const;
};

struct OmegaQuadrature {
  double value = 0.0;
  double imag_residue = 0.0;     // imaginary part of the raw quadrature
  double refinement_delta = 0.0;  // |I_h - I_{2h}|
  double l1_mass = 0.0;           // h * sum |integrand|, a roundoff scale
  double contour = 0.0;           // abscissa actually used
  bool short_circuit = false;     // returned 0 from the decay bound
};

/// Explicit decay envelope (xi/2)^3 exp(-xi^{2/j}/4), the nu = 0 case of the
/// large-xi bound for omega_j.
[[nodiscard]] double omega_decay_envelope(int j, double xi);

/// Full quadrature with diagnostics; honours w.c for xi < 4j+10. Beyond that
/// the decay envelope either certifies omega_j = 0 or the contour is moved to
/// the saddle point so the tiny value is not swamped by roundoff.
[[nodiscard]] OmegaQuadrature omega_quadrature(const OmegaWeight& w, double xi);
[[nodiscard]] double omega(const OmegaWeight& w, double xi);

/// omega_1 as (1 - 1/sqrt 2) plus the residues at s = -1/2 - 2k, summed in
/// 100-digit arithmetic. Throws NumericalError when the terms keep growing
/// past 200 terms (xi^2 >= 200).
[[nodiscard]] double omega_series1(double xi);

/// C-infinity step: 0 for y <= 0, 1 for y >= 1.
[[nodiscard]] double smooth_step(double y) noexcept;

struct BumpPhi {
  double width = 0.05;  // transition width; plays the role of 1/log X

  /// 1/log X clamped to [0.01, 0.2].
  [[nodiscard]] static BumpPhi for_scale(double X);
  void validate() const;
};

[[nodiscard]] double bump_value(const BumpPhi& phi, double x);
/// int Phi(x) dx over [1/2, 1] (the Fourier transform at 0).
[[nodiscard]] double bump_mass(const BumpPhi& phi);

struct HurwitzOptions {
  int shift = 10;           // terms summed directly before Euler-Maclaurin
  int bernoulli_terms = 10;  // B_2 .. B_{2m}; at most 10
};

[[nodiscard]] double hurwitz_zeta(double s, double a, const HurwitzOptions& opts = {});
[[nodiscard]] double riemann_zeta(double s);

}  // namespace qcentral
