#include "qcentral/moments.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "qcentral/errors.hpp"
#include "qcentral/parallel.hpp"
#include "qcentral/sieve.hpp"
#include "qcentral/summation.hpp"

namespace qcentral {

namespace {

constexpr double kOneMinusInvSqrt2 = 1.0 - 1.0 / std::numbers::sqrt2;

double log_x(std::uint64_t X) { return std::log(static_cast<double>(X)); }

std::vector<double> mollifier_values(const MomentWindow& w, const Mollifier& mollifier) {
  std::vector<double> out(w.primes.size());
  for (std::size_t i = 0; i < w.primes.size(); ++i) out[i] = mollifier(w.primes[i]);
  return out;
}

}  // namespace

LValueFn afe_lvalue(const OmegaWeights& weights, const PrimeTable& table, AfeOptions opts) {
  return [&weights, &table, opts](std::uint64_t p) { return afe_value(1, p, weights, table, opts); };
}

MomentWindow moment_window(std::uint64_t X, const BumpPhi& phi, const PrimeTable& table, unsigned workers,
                           const LValueFn& lvalue) {
  phi.validate();
  MomentWindow w;
  w.X = X;
  w.phi = phi;
  const double xd = static_cast<double>(X);
  for (std::uint64_t p : primes_1_mod_8(X / 2, X, table)) {
    const double v = bump_value(phi, static_cast<double>(p) / xd);
    if (v <= 0.0) continue;
    w.primes.push_back(p);
    w.weight.push_back(std::log(static_cast<double>(p)) * v);
  }
  w.L.resize(w.primes.size());
  parallel_for(w.primes.size(), workers, [&](std::size_t i) { w.L[i] = lvalue(w.primes[i]); });
  return w;
}

double s1(const MomentWindow& w, const Mollifier& mollifier) {
  const auto mp = mollifier_values(w, mollifier);
  CompensatedSum sum;
  for (std::size_t i = 0; i < w.primes.size(); ++i) sum.add(w.weight[i] * w.L[i] * mp[i]);
  return sum.value();
}

double s2(const MomentWindow& w, const Mollifier& mollifier) {
  const auto mp = mollifier_values(w, mollifier);
  CompensatedSum sum;
  for (std::size_t i = 0; i < w.primes.size(); ++i) {
    const double lm = w.L[i] * mp[i];
    sum.add(w.weight[i] * lm * lm);
  }
  return sum.value();
}

double m2(const MomentWindow& w) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < w.primes.size(); ++i) sum.add(w.weight[i] * w.L[i] * w.L[i]);
  return sum.value();
}

double m3(const MomentWindow& w) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < w.primes.size(); ++i) sum.add(w.weight[i] * w.L[i] * w.L[i] * w.L[i]);
  return sum.value();
}

double m3_d3(const MomentWindow& w, const OmegaWeights& weights, const PrimeTable& table, unsigned workers,
             const AfeOptions& opts) {
  std::vector<double> cubes(w.primes.size());
  parallel_for(w.primes.size(), workers,
               [&](std::size_t i) { cubes[i] = afe_value(3, w.primes[i], weights, table, opts); });
  CompensatedSum sum;
  for (std::size_t i = 0; i < w.primes.size(); ++i) sum.add(w.weight[i] * cubes[i]);
  return sum.value();
}

double m_alpha(const MomentWindow& w, double alpha1, double alpha2, const OmegaWeights& weights,
               const PrimeTable& table, unsigned workers, const AfeOptions& opts) {
  if (!(alpha1 <= alpha2)) throw DomainError("M_{a1,a2} needs a1 <= a2");
  std::vector<double> prod(w.primes.size());
  parallel_for(w.primes.size(), workers, [&](std::size_t i) {
    const double a = a_alpha(w.primes[i], alpha1, weights, table, opts);
    const double b = alpha2 == alpha1 ? a : a_alpha(w.primes[i], alpha2, weights, table, opts);
    prod[i] = a * b;
  });
  CompensatedSum sum;
  for (std::size_t i = 0; i < w.primes.size(); ++i) sum.add(w.weight[i] * prod[i]);
  return sum.value();
}

double nonvanishing_weight(const MomentWindow& w, double tol) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < w.primes.size(); ++i) {
    if (std::abs(w.L[i]) > tol) sum.add(w.weight[i]);
  }
  return sum.value();
}

double s1(std::uint64_t X, const MollifierSpec& spec, const BumpPhi& phi, const OmegaWeights& weights,
          const PrimeTable& table) {
  return s1(moment_window(X, phi, table, 1, afe_lvalue(weights, table)), Mollifier(spec, table));
}

double s2(std::uint64_t X, const MollifierSpec& spec, const BumpPhi& phi, const OmegaWeights& weights,
          const PrimeTable& table) {
  return s2(moment_window(X, phi, table, 1, afe_lvalue(weights, table)), Mollifier(spec, table));
}

double m2(std::uint64_t X, const BumpPhi& phi, const OmegaWeights& weights, const PrimeTable& table) {
  return m2(moment_window(X, phi, table, 1, afe_lvalue(weights, table)));
}

double s1_pred(std::uint64_t X, const MollifierSpec& spec, const BumpPhi& phi) {
  spec.validate();
  // With M < 3 only m = 1 survives and the H'(0) term has no meaning.
  const double ratio = spec.M >= 3.0 ? log_x(X) / (2.0 * std::log(spec.M)) : 0.0;
  const double factor = h_value(spec, 0.0) - ratio * h_deriv(spec, 0.0, 1);
  return factor / kOneMinusInvSqrt2 * (static_cast<double>(X) / 4.0) * bump_mass(phi);
}

double s2_bound(std::uint64_t X, const MollifierSpec& spec, double vartheta, double delta) {
  spec.validate();
  if (!(vartheta > 0.0)) throw ConfigError("vartheta must be positive");
  if (!(spec.theta + 2.0 * vartheta < 0.5)) throw ConfigError("need theta + 2 vartheta < 1/2");
  if (!(delta >= 0.0)) throw ConfigError("delta must be >= 0");
  return (1.0 + delta) / (2.0 * kOneMinusInvSqrt2 * kOneMinusInvSqrt2) * frak_I(spec) / vartheta *
         (static_cast<double>(X) / 4.0);
}

double constant_c() {
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  return 1.0 / (144.0 * zeta2 * kOneMinusInvSqrt2 * kOneMinusInvSqrt2);
}

double m2_pred(std::uint64_t X, const BumpPhi& phi) {
  const double l = log_x(X);
  return constant_c() * (static_cast<double>(X) / 4.0) * l * l * l * bump_mass(phi);
}

double m_alpha_pred(std::uint64_t X, const BumpPhi& phi) { return m2_pred(X, phi); }

double m3_scale(std::uint64_t X) {
  const double l = log_x(X);
  return static_cast<double>(X) * std::pow(l, 6);
}

void MomentOptions::validate() const {
  if (X < 16) throw ConfigError("moments need X >= 16");
  spec.validate();
  phi.validate();
  afe.validate();
  if (!(vartheta > 0.0 && vartheta < 0.5)) throw ConfigError("vartheta must lie in (0, 1/2)");
  if (!(spec.theta + 2.0 * vartheta < 0.5)) throw ConfigError("need theta + 2 vartheta < 1/2");
  if (!(tol >= 0.0)) throw ConfigError("nonvanishing threshold must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (alpha) {
    const auto [a1, a2] = *alpha;
    if (!(a1 > 0.0 && a1 <= a2 && a2 <= 1.0)) throw ConfigError("need 0 < alpha1 <= alpha2 <= 1");
  }
}

namespace {

SievePart sieve_part(const MomentOptions& opts, const MomentWindow& w, const Mollifier& mollifier,
                     const OmegaWeights& weights, const PrimeTable& table, const LValueFn& lvalue) {
  const SieveMode mode = *opts.sieve;
  SievePart part;
  part.Y = mode.Y > 0.0 ? mode.Y : std::pow(static_cast<double>(opts.X), 0.05);
  const LambdaTable lambda = build_lambda(SieveParams::make(opts.X, opts.vartheta), table, opts.workers);
  const double xd = static_cast<double>(opts.X);
  const double lx = log_x(opts.X);

  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 9; n <= opts.X; n += 8) {
    if (2 * n <= opts.X) continue;
    if (bump_value(opts.phi, static_cast<double>(n) / xd) > 0.0) ns.push_back(n);
  }
  // Per n: the S+ term (squarefree n only), and the N_Y / R_Y weighted terms.
  std::vector<double> plus(ns.size(), 0.0);
  std::vector<double> extra_n(ns.size(), 0.0);
  std::vector<double> extra_r(ns.size(), 0.0);
  parallel_for(ns.size(), opts.workers, [&](std::size_t i) {
    const std::uint64_t n = ns[i];
    const bool squarefree = is_squarefree(n, table);
    if (!squarefree && !mode.split) return;
    const double phi_n = bump_value(opts.phi, static_cast<double>(n) / xd);
    const double sieve = sieve_sum(n, lambda, table);
    const double mn = mollifier(n);
    if (squarefree) {
      const double l = table.is_prime(n) ? lvalue(n) : afe_value(1, n, weights, table, opts.afe);
      plus[i] = sieve * phi_n * l * l * mn * mn;
      return;
    }
    const int ny = n_y(n, part.Y, table);
    const int ry = r_y(n, part.Y, table);
    if (ny == 0 && ry == 0) return;
    const double d2 = afe_series(2, n, weights, table, opts.afe).value;
    const double common = sieve * phi_n * d2 * mn * mn;
    extra_n[i] = ny * common;
    extra_r[i] = ry * common;
  });

  CompensatedSum splus;
  CompensatedSum sn;
  CompensatedSum sr;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    splus.add(plus[i]);
    sn.add(plus[i]);
    sn.add(extra_n[i]);
    sr.add(extra_r[i]);
  }
  part.splus = splus.value();
  part.log_x_splus = lx * part.splus;
  if (mode.split) {
    part.splus_n = sn.value();
    part.splus_r = sr.value();
  }

  // Termwise: (log p) Phi L^2 M^2 <= (log X) Phi (sum_{d | p} lambda_d) L^2 M^2.
  for (std::size_t i = 0; i < w.primes.size(); ++i) {
    const std::uint64_t p = w.primes[i];
    const double mp = mollifier(p);
    const double base = w.L[i] * w.L[i] * mp * mp;
    const double lhs = w.weight[i] * base;
    const double rhs = lx * bump_value(opts.phi, static_cast<double>(p) / xd) * sieve_sum(p, lambda, table) * base;
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) ++part.pointwise_violations;
  }
  return part;
}

}  // namespace

MomentReport moment_report(const MomentOptions& opts, const OmegaWeights& weights, const PrimeTable& table,
                           const LValueFn& lvalue) {
  const auto start = std::chrono::steady_clock::now();
  opts.validate();
  MomentReport r;
  r.X = opts.X;
  r.theta = opts.spec.theta;
  r.vartheta = opts.vartheta;
  r.M = opts.spec.M;
  r.bump_width = opts.phi.width;
  r.bump_mass = bump_mass(opts.phi);
  r.worker_count = opts.workers;

  const MomentWindow w = moment_window(opts.X, opts.phi, table, opts.workers, lvalue);
  const Mollifier mollifier(opts.spec, table);

  r.S1 = s1(w, mollifier);
  r.S1_pred = s1_pred(opts.X, opts.spec, opts.phi);
  r.S2 = s2(w, mollifier);
  r.S2_bound = s2_bound(opts.X, opts.spec, opts.vartheta, opts.delta);
  r.M2 = m2(w);
  r.M2_pred = m2_pred(opts.X, opts.phi);
  r.M3_scale = m3_scale(opts.X);
  if (opts.third_moment) {
    if (opts.m3_method == M3Method::d3) {
      r.M3 = m3_d3(w, weights, table, opts.workers, opts.afe);
      r.m3_method = "d3";
    } else {
      r.M3 = m3(w);
      r.m3_method = "cube";
    }
  }
  if (opts.alpha) {
    r.alpha1 = opts.alpha->first;
    r.alpha2 = opts.alpha->second;
    r.Malpha = m_alpha(w, r.alpha1, r.alpha2, weights, table, opts.workers, opts.afe);
    r.Malpha_pred = m_alpha_pred(opts.X, opts.phi);
  }
  r.cs_lhs = r.S1 * r.S1;
  r.cs_rhs = nonvanishing_weight(w, opts.tol) * r.S2;
  r.count_total = w.primes.size();
  for (std::size_t i = 0; i < w.primes.size(); ++i) {
    if (std::abs(w.L[i]) > opts.tol) ++r.count_nonvanishing;
    r.min_L = (i == 0) ? w.L[i] : std::min(r.min_L, w.L[i]);
  }
  if (opts.sieve) r.sieve = sieve_part(opts, w, mollifier, weights, table, lvalue);

  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace qcentral
