#include "qcentral/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcentral/errors.hpp"
#include "qcentral/parallel.hpp"
#include "qcentral/special.hpp"
#include "qcentral/summation.hpp"

namespace qcentral {

namespace {

// Derivative of smooth_step.
double smooth_step_deriv(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  const double s = smooth_step(y);
  return s * (1.0 - s) * (1.0 / (y * y) + 1.0 / ((1.0 - y) * (1.0 - y)));
}

std::uint64_t lcm_squarefree(std::uint64_t m, std::uint64_t n) { return m / std::gcd(m, n) * n; }

}  // namespace

SieveParams SieveParams::make(std::uint64_t X, double vartheta, double delta_G, GMode mode) {
  if (X < 16) throw ConfigError("sieve needs X >= 16");
  SieveParams p;
  p.X = X;
  p.vartheta = vartheta;
  const double log_x = std::log(static_cast<double>(X));
  const double cube_root = std::cbrt(log_x);
  p.z0 = std::exp(cube_root);
  p.r0 = static_cast<int>(std::floor(cube_root));
  p.R = std::pow(static_cast<double>(X), vartheta);
  p.D = p.R * p.R * std::exp(2.0 * cube_root * cube_root);
  p.delta_G = delta_G > 0.0 ? delta_G : std::clamp(1.0 / std::log(log_x), 0.05, 0.49);
  p.mode = mode;
  p.validate();
  return p;
}

void SieveParams::validate() const {
  if (!(vartheta > 0.0 && vartheta < 0.5)) throw ConfigError("sieve level vartheta must lie in (0, 1/2)");
  if (!(delta_G > 0.0 && delta_G < 0.5)) throw ConfigError("G transition width must lie in (0, 1/2)");
  if (!(D >= R * R)) throw ConfigError("sieve support D must be at least R^2");
}

double selberg_g(double t, double delta_G, GMode mode) {
  const double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  if (mode == GMode::classical) return t >= 0.0 ? 1.0 - t : 1.0 + t;
  return (1.0 - t) * smooth_step((1.0 - a) / delta_G);
}

double selberg_g_deriv(double t, double delta_G, GMode mode) {
  const double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  if (mode == GMode::classical) return t >= 0.0 ? -1.0 : 1.0;
  const double y = (1.0 - a) / delta_G;
  const double sign = t >= 0.0 ? 1.0 : -1.0;
  return -smooth_step(y) - (1.0 - t) * smooth_step_deriv(y) * sign / delta_G;
}

double selberg_g_energy(double delta_G, GMode mode) {
  if (mode == GMode::classical) return 1.0;
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double t) {
    const double d = selberg_g_deriv(t, delta_G, mode);
    return d * d;
  };
  const double edge = 1.0 - delta_G;
  return edge + gauss_kronrod<double, 61>::integrate(f, edge, 1.0, 15, 1e-13);
}

LambdaTable::LambdaTable(SieveParams params, std::vector<std::pair<std::uint64_t, double>> entries)
    : params_(params), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
}

double LambdaTable::operator[](std::uint64_t d) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), d,
                                   [](const auto& e, std::uint64_t key) { return e.first < key; });
  return (it != entries_.end() && it->first == d) ? it->second : 0.0;
}

double LambdaTable::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.second));
  return m;
}

void LambdaTable::write_csv(std::ostream& out) const {
  out << "d,lambda\n";
  char buf[64];
  for (const auto& [d, v] : entries_) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << d << ',' << buf << '\n';
  }
}

LambdaTable build_lambda(const SieveParams& params, const PrimeTable& table, unsigned workers,
                         const LambdaBudget& budget) {
  params.validate();
  const auto R = static_cast<std::uint64_t>(std::floor(params.R + 1e-9));
  if (R > table.limit()) throw RangeError("prime table does not reach the sieve level R");

  std::vector<std::uint64_t> small_primes;  // P(z0)
  for (std::uint64_t p : table.primes()) {
    if (static_cast<double>(p) > params.z0) break;
    small_primes.push_back(p);
  }

  // Brun part: squarefree b | P(z0) with omega(b) <= 2 r0, in a fixed order.
  std::vector<std::pair<std::uint64_t, int>> brun{{1, 1}};
  for (std::uint64_t p : small_primes) {
    const std::size_t base = brun.size();
    for (std::size_t i = 0; i < base; ++i) brun.push_back({brun[i].first * p, -brun[i].second});
  }
  // mu(b) = (-1)^omega(b); drop b with too many prime factors.
  std::erase_if(brun, [&](const auto& e) {
    return table.factorize(e.first).omega() > 2 * params.r0;
  });

  // Selberg part: m <= R squarefree and free of primes <= z0.
  std::vector<std::pair<std::uint64_t, double>> selberg_terms;  // (m, mu(m) G(log m / log R))
  const double log_r = std::log(params.R);
  for (std::uint64_t m = 1; m <= R; ++m) {
    const auto f = table.factorize(m);
    if (!f.squarefree()) continue;
    if (!f.factors.empty() && static_cast<double>(f.factors.front().prime) <= params.z0) continue;
    const double g = selberg_g(std::log(static_cast<double>(m)) / log_r, params.delta_G, params.mode);
    if (g == 0.0) continue;
    selberg_terms.push_back({m, moebius(f) * g});
  }

  const double pairs = static_cast<double>(selberg_terms.size()) * static_cast<double>(selberg_terms.size());
  if (pairs > static_cast<double>(budget.max_entries)) {
    throw ResourceError("lambda_d construction needs " + std::to_string(pairs) +
                        " (m, n) pairs, above the budget of " + std::to_string(budget.max_entries));
  }

  // The (m, n) double sum depends on b only through the factor mu(b), so it
  // is accumulated once per l = [m, n] in loop order.
  std::unordered_map<std::uint64_t, CompensatedSum> acc;
  std::vector<std::uint64_t> order;
  for (const auto& [m, wm] : selberg_terms) {
    for (const auto& [n, wn] : selberg_terms) {
      const std::uint64_t l = lcm_squarefree(m, n);
      auto [it, inserted] = acc.try_emplace(l);
      if (inserted) order.push_back(l);
      it->second.add(wm * wn);
    }
  }
  std::vector<std::pair<std::uint64_t, double>> selberg;
  selberg.reserve(order.size());
  for (std::uint64_t l : order) {
    const double v = acc[l].value();
    if (v != 0.0) selberg.push_back({l, v});
  }

  if (static_cast<double>(brun.size()) * static_cast<double>(selberg.size()) >
      static_cast<double>(budget.max_entries)) {
    throw ResourceError("lambda_d table would exceed the budget of " + std::to_string(budget.max_entries) +
                        " entries");
  }

  // Distinct b give disjoint d (b = gcd(d, P(z0))), so each b fills its own
  // slot and the pieces are concatenated afterwards.
  std::vector<std::vector<std::pair<std::uint64_t, double>>> pieces(brun.size());
  parallel_for(brun.size(), workers, [&](std::size_t i) {
    const auto [b, mu_b] = brun[i];
    auto& out = pieces[i];
    out.reserve(selberg.size());
    for (const auto& [l, v] : selberg) out.push_back({b * l, mu_b * v});
  });

  std::size_t total = 0;
  for (const auto& piece : pieces) total += piece.size();
  std::vector<std::pair<std::uint64_t, double>> entries;
  entries.reserve(total);
  for (auto& piece : pieces) entries.insert(entries.end(), piece.begin(), piece.end());
  return LambdaTable(params, std::move(entries));
}

double sieve_sum(std::uint64_t n, const LambdaTable& lambda, const PrimeTable& table) {
  if (n < 1) throw DomainError("sieve_sum needs n >= 1");
  CompensatedSum sum;
  for (std::uint64_t d : squarefree_divisors(table.factorize(n))) {
    if (static_cast<double>(d) > lambda.params().D) break;
    sum.add(lambda[d]);
  }
  return sum.value();
}

FundamentalLemma fundamental_lemma_check(const std::function<double(std::uint64_t)>& g, int r,
                                         double z0, std::uint64_t ell, const PrimeTable& table) {
  if (r < 0) throw DomainError("truncation level r must be >= 0");
  if (ell < 1) throw DomainError("coprimality modulus must be >= 1");
  if (static_cast<double>(table.limit()) < z0) throw RangeError("prime table does not reach z0");
  std::vector<double> weights;  // g(p)/p for admissible p <= z0
  FundamentalLemma out{0.0, 1.0};
  for (std::uint64_t p : table.primes()) {
    if (static_cast<double>(p) > z0) break;
    if (ell % p == 0) continue;
    const double w = g(p) / static_cast<double>(p);
    weights.push_back(w);
    out.rhs *= 1.0 - w;
  }

  // sum over subsets of size <= r of prod(-w): elementary symmetric sums.
  std::vector<double> e(static_cast<std::size_t>(r) + 1, 0.0);
  e[0] = 1.0;
  for (double w : weights) {
    for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += e[k - 1] * (-w);
  }
  CompensatedSum lhs;
  for (double v : e) lhs.add(v);
  out.lhs = lhs.value();
  return out;
}

}  // namespace qcentral
