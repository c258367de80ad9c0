#pragma once

// Upper-bound sieve for primes built from a Brun preliminary sieve over the
// primes up to z0 = exp((log X)^{1/3}) and an analytic Selberg sieve with
// weight G on the remaining primes up to R = X^vartheta:
//
//   lambda_d = sum_{b | P(z0), omega(b) <= 2 r0} sum_{m, n <= R, b[m,n] = d,
//              (mn, P(z0)) = 1} mu(b) mu(m) mu(n) G(log m / log R) G(log n / log R)
//
// so that 1_{prime}(n) <= sum_{d | n} lambda_d.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "qcentral/arith.hpp"

namespace qcentral {

enum class GMode { smooth, classical };

struct SieveParams {
  std::uint64_t X = 0;
  double vartheta = 0.0;
  double z0 = 0.0;
  int r0 = 0;
  double R = 0.0;
  double D = 0.0;
  double delta_G = 0.0;  // transition width of the smooth G
  GMode mode = GMode::smooth;

  /// Fills the derived fields from X and vartheta. A non-positive delta_G
  /// selects the default 1/log log X clamped to [0.05, 0.49].
  [[nodiscard]] static SieveParams make(std::uint64_t X, double vartheta, double delta_G = 0.0,
                                        GMode mode = GMode::smooth);
  void validate() const;
};

/// G(t): equal to 1 - t on [0, 1 - delta_G], supported in [-1, 1], smooth and
/// nonnegative. Classical mode is max(1 - |t|, 0) restricted the same way.
[[nodiscard]] double selberg_g(double t, double delta_G, GMode mode = GMode::smooth);
[[nodiscard]] double selberg_g_deriv(double t, double delta_G, GMode mode = GMode::smooth);
/// int_0^inf G'(t)^2 dt by adaptive quadrature.
[[nodiscard]] double selberg_g_energy(double delta_G, GMode mode = GMode::smooth);

struct LambdaBudget {
  std::uint64_t max_entries = 100'000'000;
};

class LambdaTable {
 public:
  LambdaTable(SieveParams params, std::vector<std::pair<std::uint64_t, double>> entries);

  [[nodiscard]] const SieveParams& params() const noexcept { return params_; }
  /// (d, lambda_d), ascending in d, nonzero entries only.
  [[nodiscard]] const std::vector<std::pair<std::uint64_t, double>>& entries() const noexcept {
    return entries_;
  }
  [[nodiscard]] double operator[](std::uint64_t d) const;
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] double max_abs() const noexcept;

  void write_csv(std::ostream& out) const;

 private:
  SieveParams params_;
  std::vector<std::pair<std::uint64_t, double>> entries_;
};

/// Requires table.limit() >= R. Throws ResourceError when the number of
/// (b, m, n) combinations or stored entries exceeds the budget.
[[nodiscard]] LambdaTable build_lambda(const SieveParams& params, const PrimeTable& table,
                                       unsigned workers = 1, const LambdaBudget& budget = {});

/// sum_{d | n} lambda_d.
[[nodiscard]] double sieve_sum(std::uint64_t n, const LambdaTable& lambda, const PrimeTable& table);

struct FundamentalLemma {
  double lhs;  // truncated sum over b | P(z0), omega(b) <= r, (b, l) = 1
  double rhs;  // prod_{p <= z0, p not | l} (1 - g(p)/p)
};

/// g is given by its values on primes and extended multiplicatively.
[[nodiscard]] FundamentalLemma fundamental_lemma_check(const std::function<double(std::uint64_t)>& g,
                                                       int r, double z0, std::uint64_t ell,
                                                       const PrimeTable& table);

}  // namespace qcentral
