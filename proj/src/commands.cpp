#include "qcentral/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>

#include "qcentral/cache.hpp"
#include "qcentral/errors.hpp"
#include "qcentral/lcentral.hpp"
#include "qcentral/mollify.hpp"
#include "qcentral/moments.hpp"
#include "qcentral/parallel.hpp"
#include "qcentral/report.hpp"
#include "qcentral/verify.hpp"

namespace qcentral {

namespace {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const RangeError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const std::bad_alloc&) {
    err << "resource error: out of memory\n";
    return kExitResourceError;
  }
}

AfeOptions afe_options(const RunConfig& c) {
  AfeOptions o;
  o.tail_tolerance = c.tail_tolerance;
  o.max_terms = c.max_terms;
  return o;
}

std::unique_ptr<LValueCache> open_cache(const RunConfig& c, const OmegaWeights& weights, std::ostream& err) {
  if (c.cache_path.empty()) return nullptr;
  return std::make_unique<LValueCache>(c.cache_path, cache_version(weights, afe_options(c)),
                                       [&err](const std::string& msg) { err << "warning: " << msg << "\n"; });
}

std::uint64_t cache_tag(const RunConfig& c, const OmegaWeights& weights) {
  return cache_version(weights, afe_options(c));
}

PrimeTable table_for(std::uint64_t limit) {
  if (limit > PrimeTable::kMaxLimit) {
    throw ResourceError("needs primes up to " + std::to_string(limit) + ", above the supported 1e9");
  }
  return PrimeTable(std::max<std::uint64_t>(limit, 1000));
}

LValueFn lvalue_fn(LValueCache* cache, const OmegaWeights& weights, const PrimeTable& table,
                   const AfeOptions& opts) {
  if (cache == nullptr) return afe_lvalue(weights, table, opts);
  return [cache, &weights, &table, opts](std::uint64_t p) {
    return lvalue_cache_get_or_compute(p, *cache, weights, table, opts);
  };
}

void emit(const RunConfig& c, std::ostream& out, const std::string& content) {
  if (c.output_path.empty()) {
    out << content;
  } else {
    write_text_file(c.output_path, content);
  }
}

void emit_run_metadata(const RunConfig& c, std::ostream& err, Clock::time_point start, const LValueCache* cache) {
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  ojson meta = run_metadata(seconds, c.workers);
  if (cache != nullptr) {
    meta["cache_path"] = c.cache_path;
    meta["cache_hits"] = cache->hits();
    meta["cache_misses"] = cache->misses();
    meta["cache_invalidated"] = cache->invalidated();
  }
  if (c.output_path.empty()) {
    err << "run: " << meta.dump() << "\n";
  } else {
    write_text_file(c.output_path + ".run.json", meta.dump(2) + "\n");
  }
}

}  // namespace

int cmd_census(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    c.validate(false);
    const OmegaWeights& weights = OmegaWeights::standard();
    const AfeOptions opts = afe_options(c);
    const PrimeTable table = table_for(std::max(c.X, afe_table_limit(1, c.X, weights, opts)));
    auto cache = open_cache(c, weights, err);
    const LValueFn lvalue = lvalue_fn(cache.get(), weights, table, opts);

    auto primes = primes_1_mod_8(0, c.X, table);
    std::vector<double> values(primes.size());
    parallel_for(primes.size(), c.workers, [&](std::size_t i) { values[i] = lvalue(primes[i]); });
    const CensusRecord rec = census_from_values(c.X, c.tol, std::move(primes), std::move(values));
    const ojson versions = versions_json(weights.version(), cache_tag(c, weights));

    if (c.output_format == OutputFormat::csv) {
      emit(c, out, census_csv(rec));
      const std::string summary = census_summary_json(rec, c, versions).dump(2) + "\n";
      if (c.output_path.empty()) {
        err << summary;
      } else {
        write_text_file(c.output_path + ".summary.json", summary);
      }
    } else {
      emit(c, out, census_json(rec, c, versions).dump(2) + "\n");
    }
    emit_run_metadata(c, err, start, cache.get());
    return int{kExitOk};
  });
}

int cmd_moments(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    c.validate(true);
    const OmegaWeights& weights = OmegaWeights::standard();

    MomentOptions mo;
    mo.X = c.X;
    mo.spec = MollifierSpec::hstar(c.theta).with_length_for(static_cast<double>(c.X));
    mo.vartheta = c.vartheta;
    mo.delta = c.delta;
    mo.phi = c.bump_width ? BumpPhi{*c.bump_width} : BumpPhi::for_scale(static_cast<double>(c.X));
    mo.tol = c.tol;
    mo.third_moment = c.third_moment;
    mo.m3_method = c.m3_method == "d3" ? M3Method::d3 : M3Method::cube;
    if (c.alpha1) mo.alpha = std::pair{*c.alpha1, *c.alpha2};
    if (c.sieve_mode) mo.sieve = SieveMode{c.effective_Y(), c.sieve_split};
    mo.workers = c.workers;
    mo.afe = afe_options(c);
    mo.validate();

    std::uint64_t limit = std::max(c.X, afe_table_limit(1, c.X, weights, mo.afe));
    if (mo.third_moment && mo.m3_method == M3Method::d3) {
      limit = std::max(limit, afe_table_limit(3, c.X, weights, mo.afe));
    }
    if (mo.sieve && mo.sieve->split) limit = std::max(limit, afe_table_limit(2, c.X, weights, mo.afe));
    const PrimeTable table = table_for(limit);
    auto cache = open_cache(c, weights, err);

    const MomentReport report = moment_report(mo, weights, table, lvalue_fn(cache.get(), weights, table, mo.afe));
    const ojson versions = versions_json(weights.version(), cache_tag(c, weights));
    if (c.output_format == OutputFormat::json) {
      emit(c, out, moment_report_json(report, c, versions).dump(2) + "\n");
    } else {
      emit(c, out, moment_report_csv(report));
    }
    emit_run_metadata(c, err, start, cache.get());
    return int{kExitOk};
  });
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    c.validate(false);
    const OmegaWeights& weights = OmegaWeights::standard();
    VerifyOptions vo;
    vo.seed = c.seed;
    vo.workers = c.workers;
    vo.sieve_X = c.X;
    vo.sieve_vartheta = c.vartheta;
    const PrimeTable table =
        table_for(std::max(verify_table_limit(vo), afe_table_limit(2, vo.afe_n_max, weights)));

    bool ok = true;
    for (const SuiteResult& r : run_verify_suites(vo, weights, table)) {
      char line[200];
      std::snprintf(line, sizeof line, "%s %-18s cases=%llu max_error=%.3g time=%.2fs\n", r.ok() ? "PASS" : "FAIL",
                    r.name.c_str(), static_cast<unsigned long long>(r.cases), r.max_error, r.seconds);
      out << line;
      for (const auto& f : r.failures) out << "  " << f << "\n";
      if (r.failure_count > r.failures.size()) {
        out << "  ... " << (r.failure_count - r.failures.size()) << " more\n";
      }
      ok = ok && r.ok();
    }
    return int{ok ? kExitOk : kExitSuiteFailure};
  });
}

int cmd_optimize(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double t0 = theta0();
    std::string text;
    text += "theta0," + format_double(t0) + "\n";
    text += "rho_theta0," + format_double(rho(t0)) + "\n";
    text += "frak_c," + format_double(constant_c()) + "\n";
    text += "\ntheta,rho\n";
    for (int i = 0; i <= 50; ++i) {
      const double t = i / 100.0;
      text += format_double(t) + "," + format_double(rho(t)) + "\n";
    }
    emit(c, out, text);
    return int{kExitOk};
  });
}

int cmd_lvalue(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (c.p == 0) throw ConfigError("lvalue needs --p");
    const OmegaWeights& weights = OmegaWeights::standard();
    const AfeOptions opts = afe_options(c);
    opts.validate();
    const PrimeTable table = table_for(std::max(c.p, afe_table_limit(1, c.p, weights, opts)));
    if (c.p % 8 != 1 || !table.is_prime(c.p)) throw DomainError("p must be a prime = 1 mod 8");
    auto cache = open_cache(c, weights, err);
    const LValueRecord rec = afe_record(1, c.p, weights, table, opts);
    const double value =
        cache ? lvalue_cache_get_or_compute(c.p, *cache, weights, table, opts) : rec.value;
    std::string text = "p,L,terms_used,xi_max,tail_estimate\n";
    text += std::to_string(c.p) + "," + format_double(value) + "," + std::to_string(rec.terms_used) + "," +
            format_double(rec.xi_max) + "," + format_double(rec.tail_estimate) + "\n";
    emit(c, out, text);
    return int{kExitOk};
  });
}

}  // namespace qcentral
