#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qcentral/commands.hpp"
#include "qcentral/config.hpp"
#include "qcentral/errors.hpp"

namespace {

struct Flags {
  std::string config_file;
  std::optional<double> X;  // accepts 1e6
  std::optional<double> theta, vartheta, Y, tol, delta, bump_width, alpha1, alpha2, tail_tolerance;
  std::optional<unsigned> workers;
  std::optional<std::string> cache, output, format, m3_method;
  std::optional<std::uint64_t> seed, max_terms, p;
  bool no_third_moment = false;
  bool sieve = false;
  bool sieve_split = false;
};

std::uint64_t as_count(double v, const char* name) {
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
    throw qcentral::ConfigError(std::string(name) + " must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config_file, "JSON config file");
  app.add_option("--X", f.X, "upper end of the prime range");
  app.add_option("--theta", f.theta, "mollifier length exponent");
  app.add_option("--vartheta", f.vartheta, "sieve level exponent");
  app.add_option("--Y", f.Y, "mu^2 split parameter (default X^0.05)");
  app.add_option("--tol", f.tol, "nonvanishing threshold on |L|");
  app.add_option("--workers", f.workers, "worker threads")->check(CLI::Range(1u, 4096u));
  app.add_option("--cache", f.cache, "L-value cache file");
  app.add_option("--output", f.output, "output file (default stdout)");
  app.add_option("--format", f.format, "csv or json");
  app.add_option("--seed", f.seed, "seed for sampled checks");
  app.add_option("--delta", f.delta, "slack in the S2 bound");
  app.add_option("--bump-width", f.bump_width, "transition width of Phi");
  app.add_option("--alpha1", f.alpha1, "first A_alpha exponent");
  app.add_option("--alpha2", f.alpha2, "second A_alpha exponent");
  app.add_option("--m3-method", f.m3_method, "cube or d3");
  app.add_flag("--no-third-moment", f.no_third_moment, "skip the third moment");
  app.add_flag("--sieve", f.sieve, "compare S2 with the sieve-weighted S+");
  app.add_flag("--sieve-split", f.sieve_split, "also compute S+_N and S+_R");
  app.add_option("--tail-tolerance", f.tail_tolerance, "AFE truncation tolerance");
  app.add_option("--max-terms", f.max_terms, "AFE term cap");
  app.add_option("--p", f.p, "prime for the lvalue subcommand");
}

qcentral::RunConfig build_config(const Flags& f) {
  qcentral::RunConfig c;
  if (!f.config_file.empty()) qcentral::apply_config_file(c, f.config_file);
  qcentral::apply_env(c, qcentral::process_env());
  if (f.X) c.X = as_count(*f.X, "--X");
  if (f.theta) c.theta = *f.theta;
  if (f.vartheta) c.vartheta = *f.vartheta;
  if (f.Y) c.Y = *f.Y;
  if (f.tol) c.tol = *f.tol;
  if (f.workers) c.workers = *f.workers;
  if (f.cache) c.cache_path = *f.cache;
  if (f.output) c.output_path = *f.output;
  if (f.format) c.output_format = qcentral::parse_output_format(*f.format);
  if (f.seed) c.seed = *f.seed;
  if (f.delta) c.delta = *f.delta;
  if (f.bump_width) c.bump_width = *f.bump_width;
  if (f.alpha1) c.alpha1 = *f.alpha1;
  if (f.alpha2) c.alpha2 = *f.alpha2;
  if (f.m3_method) c.m3_method = *f.m3_method;
  if (f.no_third_moment) c.third_moment = false;
  if (f.sieve) c.sieve_mode = true;
  if (f.sieve_split) c.sieve_mode = c.sieve_split = true;
  if (f.tail_tolerance) c.tail_tolerance = *f.tail_tolerance;
  if (f.max_terms) c.max_terms = *f.max_terms;
  if (f.p) c.p = *f.p;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Central values of quadratic Dirichlet L-functions at prime conductors"};
  app.require_subcommand(1);
  Flags flags;
  using Cmd = int (*)(const qcentral::RunConfig&, std::ostream&, std::ostream&);
  Cmd chosen = nullptr;
  const auto sub = [&](const char* name, const char* help, Cmd cmd) {
    CLI::App* s = app.add_subcommand(name, help);
    add_flags(*s, flags);
    s->callback([&chosen, cmd] { chosen = cmd; });
  };
  sub("census", "evaluate L(1/2, chi_p) for all primes p = 1 mod 8 up to X", qcentral::cmd_census);
  sub("moments", "mollified and plain moments with their predicted main terms", qcentral::cmd_moments);
  sub("verify", "run the exact-identity suites", qcentral::cmd_verify);
  sub("optimize", "theta0, rho(theta0), the constant c and the rho(theta) curve", qcentral::cmd_optimize);
  sub("lvalue", "one central value", qcentral::cmd_lvalue);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcentral::kExitConfigError;
  }
  qcentral::RunConfig config;
  try {
    config = build_config(flags);
  } catch (const qcentral::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return qcentral::kExitConfigError;
  }
  return chosen(config, std::cout, std::cerr);
}
