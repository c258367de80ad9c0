#pragma once

// Empirical moments over primes p = 1 mod 8 weighted by (log p) Phi(p/X),
// paired with their predicted main terms:
//
//   S1 = sum (log p) Phi(p/X) L(1/2, chi_p) M(p)
//   S2 = sum (log p) Phi(p/X) L(1/2, chi_p)^2 M(p)^2
//   M2 = sum (log p) Phi(p/X) L(1/2, chi_p)^2,  M3 likewise with L^3
//   M_{a1,a2} = sum (log p) Phi(p/X) A_{a1}(p) A_{a2}(p)

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcentral/arith.hpp"
#include "qcentral/lcentral.hpp"
#include "qcentral/mollify.hpp"
#include "qcentral/omega_table.hpp"
#include "qcentral/special.hpp"

namespace qcentral {

/// Returns L(1/2, chi_p); must be safe to call from several threads.
using LValueFn = std::function<double(std::uint64_t)>;

[[nodiscard]] LValueFn afe_lvalue(const OmegaWeights& weights, const PrimeTable& table,
                                  AfeOptions opts = {});

// Primes p = 1 mod 8 with Phi(p/X) > 0, their weights and central values,
// all in ascending order of p.
struct MomentWindow {
  std::uint64_t X = 0;
  BumpPhi phi;
  std::vector<std::uint64_t> primes;
  std::vector<double> weight;  // (log p) Phi(p/X)
  std::vector<double> L;
};

[[nodiscard]] MomentWindow moment_window(std::uint64_t X, const BumpPhi& phi, const PrimeTable& table,
                                         unsigned workers, const LValueFn& lvalue);

/// Sums run over the window in its stored order with compensated summation.
[[nodiscard]] double s1(const MomentWindow& w, const Mollifier& mollifier);
[[nodiscard]] double s2(const MomentWindow& w, const Mollifier& mollifier);
[[nodiscard]] double m2(const MomentWindow& w);
/// Weighted sum of L^3 from the stored values (the cube of the j = 1 series).
[[nodiscard]] double m3(const MomentWindow& w);
/// Third moment with each L^3 evaluated as the j = 3 series.
[[nodiscard]] double m3_d3(const MomentWindow& w, const OmegaWeights& weights, const PrimeTable& table,
                           unsigned workers, const AfeOptions& opts = {});
[[nodiscard]] double m_alpha(const MomentWindow& w, double alpha1, double alpha2,
                             const OmegaWeights& weights, const PrimeTable& table, unsigned workers,
                             const AfeOptions& opts = {});
/// sum of the weights over primes with |L| > tol.
[[nodiscard]] double nonvanishing_weight(const MomentWindow& w, double tol);

// Single-call forms.
[[nodiscard]] double s1(std::uint64_t X, const MollifierSpec& spec, const BumpPhi& phi,
                        const OmegaWeights& weights, const PrimeTable& table);
[[nodiscard]] double s2(std::uint64_t X, const MollifierSpec& spec, const BumpPhi& phi,
                        const OmegaWeights& weights, const PrimeTable& table);
[[nodiscard]] double m2(std::uint64_t X, const BumpPhi& phi, const OmegaWeights& weights,
                        const PrimeTable& table);

/// (1/(1 - 1/sqrt 2)) (H(0) - (log X / (2 log M)) H'(0)) (X/4) int Phi.
/// For M < 3 the mollifier is the constant H(0) and the H'(0) term is dropped.
[[nodiscard]] double s1_pred(std::uint64_t X, const MollifierSpec& spec, const BumpPhi& phi);
/// (1 + delta) / (2 (1 - 1/sqrt 2)^2) * I[H] / vartheta * X / 4; requires
/// theta + 2 vartheta < 1/2.
[[nodiscard]] double s2_bound(std::uint64_t X, const MollifierSpec& spec, double vartheta, double delta);
/// (144 zeta(2) (1 - 1/sqrt 2)^2)^{-1}.
[[nodiscard]] double constant_c();
/// c (X/4) (log X)^3 int Phi.
[[nodiscard]] double m2_pred(std::uint64_t X, const BumpPhi& phi);
/// Same main term; the 1/2 in front of the M_{a1,a2} asymptotic is read as int Phi.
[[nodiscard]] double m_alpha_pred(std::uint64_t X, const BumpPhi& phi);
/// X (log X)^6.
[[nodiscard]] double m3_scale(std::uint64_t X);

enum class M3Method { cube, d3 };

struct SieveMode {
  double Y = 0.0;           // mu^2 split parameter; <= 0 means X^{0.05}
  bool split = false;       // also evaluate S+_N and S+_R (costly)
};

struct MomentOptions {
  std::uint64_t X = 10'000;
  MollifierSpec spec;  // M taken as given; use with_length_for(X) for X^theta
  double vartheta = 0.15;
  double delta = 0.0;  // the (1 + delta) slack in the S2 bound
  BumpPhi phi;
  double tol = 1e-8;
  bool third_moment = true;
  M3Method m3_method = M3Method::cube;
  std::optional<std::pair<double, double>> alpha;
  std::optional<SieveMode> sieve;
  unsigned workers = 1;
  AfeOptions afe;

  void validate() const;
};

struct SievePart {
  double Y = 0.0;
  double splus = 0.0;           // S+ over squarefree n = 1 mod 8 in the window
  double log_x_splus = 0.0;     // (log X) S+
  std::uint64_t pointwise_violations = 0;  // primes whose S2 term exceeds its S+ term
  std::optional<double> splus_n;
  std::optional<double> splus_r;
};

struct MomentReport {
  std::uint64_t X = 0;
  double theta = 0.0;
  double vartheta = 0.0;
  double M = 0.0;
  double bump_width = 0.0;
  double bump_mass = 0.0;
  double S1 = 0.0, S1_pred = 0.0;
  double S2 = 0.0, S2_bound = 0.0;
  double M2 = 0.0, M2_pred = 0.0;
  std::optional<double> M3;
  double M3_scale = 0.0;
  std::string m3_method;
  std::optional<double> Malpha;
  double alpha1 = 0.0, alpha2 = 0.0;
  double Malpha_pred = 0.0;
  double cs_lhs = 0.0;  // S1^2
  double cs_rhs = 0.0;  // (sum over |L| > tol of the weights) S2
  std::uint64_t count_total = 0;
  std::uint64_t count_nonvanishing = 0;
  double min_L = 0.0;
  std::optional<SievePart> sieve;
  // run metadata, kept out of the comparison payload
  double runtime_seconds = 0.0;
  unsigned worker_count = 1;
};

[[nodiscard]] MomentReport moment_report(const MomentOptions& opts, const OmegaWeights& weights,
                                         const PrimeTable& table, const LValueFn& lvalue);

}  // namespace qcentral
