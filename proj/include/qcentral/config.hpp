#pragma once

// Run configuration shared by every subcommand. Sources, lowest precedence
// first: built-in defaults, a JSON config file, the QCENTRAL_WORKERS and
// QCENTRAL_CACHE environment variables, then command-line flags.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

namespace qcentral {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::uint64_t X = 10'000;
  double theta = 0.17409;
  double vartheta = 0.15;
  double Y = 0.0;  // mu^2 split parameter; <= 0 means X^{0.05}
  double tol = 1e-8;
  unsigned workers = 1;
  std::string cache_path;   // empty: no cache
  std::string output_path;  // empty: stdout
  OutputFormat output_format = OutputFormat::csv;
  std::uint64_t seed = 20240601;

  double delta = 0.0;                  // slack in the S2 bound
  std::optional<double> bump_width;    // default 1/log X clamped
  std::optional<double> alpha1;        // with alpha2, enables M_{a1,a2}
  std::optional<double> alpha2;
  bool third_moment = true;
  std::string m3_method = "cube";      // cube | d3
  bool sieve_mode = false;             // S+ comparison
  bool sieve_split = false;            // also S+_N and S+_R
  double tail_tolerance = 1e-9;
  std::uint64_t max_terms = 10'000'000;
  std::uint64_t p = 0;                 // lvalue subcommand

  /// Throws ConfigError. `uses_vartheta` enforces theta + 2 vartheta < 1/2.
  void validate(bool uses_vartheta) const;
  /// Y as used: the configured value, or X^{0.05}.
  [[nodiscard]] double effective_Y() const;

  /// Settings that shape results; excludes workers and file paths so that
  /// reports do not depend on them.
  [[nodiscard]] nlohmann::ordered_json result_fields() const;
};

[[nodiscard]] std::string to_string(OutputFormat f);
[[nodiscard]] OutputFormat parse_output_format(const std::string& s);

/// Applies the keys of a JSON object; unknown keys and type mismatches throw
/// ConfigError.
void apply_json(RunConfig& config, const nlohmann::json& j);
void apply_config_file(RunConfig& config, const std::string& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;
/// QCENTRAL_WORKERS and QCENTRAL_CACHE only.
void apply_env(RunConfig& config, const EnvLookup& env);
[[nodiscard]] EnvLookup process_env();

}  // namespace qcentral
