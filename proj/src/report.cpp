#include "qcentral/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcentral/errors.hpp"
#include "qcentral/mollify.hpp"

namespace qcentral {

namespace {

using ojson = nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// JSON has no inf/nan; those become null.
ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson optional_number(const std::optional<double>& v) { return v ? number(*v) : ojson(nullptr); }

double ratio(double a, double b) { return b != 0.0 ? a / b : NAN; }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson versions_json(std::uint64_t weights_version, std::uint64_t cache_version) {
  ojson j;
  j["qcentral"] = kVersion;
  j["omega_weights"] = hex64(weights_version);
  j["lvalue_cache"] = hex64(cache_version);
  return j;
}

std::string census_csv(const CensusRecord& rec) {
  std::string out = "p,L,nonzero_flag\n";
  out.reserve(out.size() + rec.primes.size() * 36);
  for (std::size_t i = 0; i < rec.primes.size(); ++i) {
    out += std::to_string(rec.primes[i]);
    out += ',';
    out += format_double(rec.values[i]);
    out += std::abs(rec.values[i]) > rec.tol ? ",1\n" : ",0\n";
  }
  return out;
}

ojson census_summary_json(const CensusRecord& rec, const RunConfig& config, const ojson& versions) {
  ojson j;
  j["kind"] = "census";
  j["config"] = config.result_fields();
  j["versions"] = versions;
  j["X"] = rec.X;
  j["tol"] = rec.tol;
  j["count_total"] = rec.count_total;
  j["count_nonvanishing"] = rec.count_nonvanishing;
  j["count_near_threshold"] = rec.count_near_threshold;
  j["count_negative"] = rec.count_negative;
  j["proportion"] = number(rec.proportion());
  j["floor"] = kNonvanishingFloor;
  j["meets_floor"] = rec.proportion() >= kNonvanishingFloor;
  j["min_abs"] = number(rec.min_abs);
  j["argmin_abs"] = rec.argmin_abs;
  j["min_value"] = number(rec.min_value);
  j["max_value"] = number(rec.max_value);
  j["mean_value"] = number(rec.mean_value);
  ojson hist = ojson::array();
  for (const auto& b : rec.histogram) {
    hist.push_back({{"lo", number(b.lo)}, {"hi", number(b.hi)}, {"count", b.count}});
  }
  j["histogram"] = hist;
  return j;
}

ojson census_json(const CensusRecord& rec, const RunConfig& config, const ojson& versions) {
  ojson j = census_summary_json(rec, config, versions);
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < rec.primes.size(); ++i) {
    rows.push_back({rec.primes[i], number(rec.values[i]), std::abs(rec.values[i]) > rec.tol ? 1 : 0});
  }
  j["rows"] = rows;
  return j;
}

ojson moment_report_json(const MomentReport& r, const RunConfig& config, const ojson& versions) {
  ojson j;
  j["kind"] = "moments";
  j["config"] = config.result_fields();
  j["versions"] = versions;
  j["X"] = r.X;
  j["theta"] = r.theta;
  j["vartheta"] = r.vartheta;
  j["M"] = number(r.M);
  j["bump_width"] = r.bump_width;
  j["bump_mass"] = number(r.bump_mass);
  j["S1"] = number(r.S1);
  j["S1_pred"] = number(r.S1_pred);
  j["S1_ratio"] = number(ratio(r.S1, r.S1_pred));
  j["S2"] = number(r.S2);
  j["S2_bound"] = number(r.S2_bound);
  j["S2_ratio"] = number(ratio(r.S2, r.S2_bound));
  // The bound is asymptotic; exceeding it at finite X is an observation.
  j["S2_within_bound"] = r.S2 <= r.S2_bound;
  j["M2"] = number(r.M2);
  j["M2_pred"] = number(r.M2_pred);
  j["M2_ratio"] = number(ratio(r.M2, r.M2_pred));
  j["frak_c"] = constant_c();
  j["M3"] = optional_number(r.M3);
  j["M3_method"] = r.M3 ? ojson(r.m3_method) : ojson(nullptr);
  j["M3_scale"] = number(r.M3_scale);
  j["M3_ratio"] = r.M3 ? number(*r.M3 / r.M3_scale) : ojson(nullptr);
  if (r.Malpha) {
    j["Malpha"] = number(*r.Malpha);
    j["alpha1"] = r.alpha1;
    j["alpha2"] = r.alpha2;
    j["Malpha_pred"] = number(r.Malpha_pred);
    j["Malpha_ratio"] = number(ratio(*r.Malpha, r.Malpha_pred));
  }
  j["cs_lhs"] = number(r.cs_lhs);
  j["cs_rhs"] = number(r.cs_rhs);
  j["cs_holds"] = r.cs_rhs >= r.cs_lhs - 1e-6 * std::abs(r.cs_lhs);
  j["count_total"] = r.count_total;
  j["count_nonvanishing"] = r.count_nonvanishing;
  j["min_L"] = number(r.min_L);
  if (r.sieve) {
    const SievePart& s = *r.sieve;
    ojson sj;
    sj["Y"] = s.Y;
    sj["S_plus"] = number(s.splus);
    sj["logX_S_plus"] = number(s.log_x_splus);
    sj["S2_le_logX_S_plus"] = r.S2 <= s.log_x_splus;
    sj["pointwise_violations"] = s.pointwise_violations;
    sj["S_plus_N"] = optional_number(s.splus_n);
    sj["S_plus_R"] = optional_number(s.splus_r);
    j["sieve"] = sj;
  }
  return j;
}

std::string moment_report_csv(const MomentReport& r) {
  std::ostringstream head;
  std::ostringstream row;
  bool first = true;
  const auto col = [&](const char* name, const std::string& value) {
    if (!first) {
      head << ',';
      row << ',';
    }
    first = false;
    head << name;
    row << value;
  };
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  col("X", std::to_string(r.X));
  col("theta", format_double(r.theta));
  col("vartheta", format_double(r.vartheta));
  col("M", format_double(r.M));
  col("bump_width", format_double(r.bump_width));
  col("bump_mass", format_double(r.bump_mass));
  col("S1", format_double(r.S1));
  col("S1_pred", format_double(r.S1_pred));
  col("S2", format_double(r.S2));
  col("S2_bound", format_double(r.S2_bound));
  col("M2", format_double(r.M2));
  col("M2_pred", format_double(r.M2_pred));
  col("M3", opt(r.M3));
  col("M3_scale", format_double(r.M3_scale));
  col("Malpha", opt(r.Malpha));
  col("alpha1", r.Malpha ? format_double(r.alpha1) : "");
  col("alpha2", r.Malpha ? format_double(r.alpha2) : "");
  col("Malpha_pred", r.Malpha ? format_double(r.Malpha_pred) : "");
  col("cs_lhs", format_double(r.cs_lhs));
  col("cs_rhs", format_double(r.cs_rhs));
  col("count_total", std::to_string(r.count_total));
  col("count_nonvanishing", std::to_string(r.count_nonvanishing));
  col("min_L", format_double(r.min_L));
  col("S_plus", r.sieve ? format_double(r.sieve->splus) : "");
  col("pointwise_violations", r.sieve ? std::to_string(r.sieve->pointwise_violations) : "");
  col("S_plus_N", r.sieve ? opt(r.sieve->splus_n) : "");
  col("S_plus_R", r.sieve ? opt(r.sieve->splus_r) : "");
  return head.str() + "\n" + row.str() + "\n";
}

ojson run_metadata(double runtime_seconds, unsigned workers) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  ojson j;
  j["finished_at"] = stamp;
  j["runtime_seconds"] = runtime_seconds;
  j["worker_count"] = workers;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ResourceError("cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ResourceError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace qcentral
