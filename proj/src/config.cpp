#include "qcentral/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "qcentral/errors.hpp"

namespace qcentral {

namespace {

template <typename T>
T get_as(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::uint64_t get_count(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    // allow 1e6 style values when they are exact integers
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError("config key '" + key + "' must be a nonnegative integer");
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("output format must be csv or json, got '" + s + "'");
}

void RunConfig::validate(bool uses_vartheta) const {
  if (X < 16) throw ConfigError("X must be at least 16");
  if (X > 1'000'000'000) throw ConfigError("X above 1e9 is not supported");
  if (!(theta > 0.0 && theta < 0.5)) throw ConfigError("theta must lie in (0, 1/2)");
  if (!(vartheta > 0.0 && vartheta < 0.5)) throw ConfigError("vartheta must lie in (0, 1/2)");
  if (uses_vartheta && !(theta + 2.0 * vartheta < 0.5)) {
    throw ConfigError("theta + 2 vartheta must be < 1/2");
  }
  if (!std::isfinite(Y)) throw ConfigError("Y must be finite");
  if (Y > 0.0 && Y < 1.0) throw ConfigError("Y must be >= 1 (or <= 0 for the default)");
  if (!(tol >= 0.0)) throw ConfigError("tol must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(delta >= 0.0)) throw ConfigError("delta must be >= 0");
  if (bump_width && !(*bump_width > 0.0 && *bump_width < 0.25)) {
    throw ConfigError("bump width must lie in (0, 1/4)");
  }
  if (alpha1.has_value() != alpha2.has_value()) throw ConfigError("alpha1 and alpha2 go together");
  if (alpha1 && !(*alpha1 > 0.0 && *alpha1 <= *alpha2 && *alpha2 <= 1.0)) {
    throw ConfigError("need 0 < alpha1 <= alpha2 <= 1");
  }
  if (m3_method != "cube" && m3_method != "d3") throw ConfigError("m3 method must be cube or d3");
  if (!(tail_tolerance > 0.0)) throw ConfigError("tail tolerance must be positive");
  if (max_terms < 1) throw ConfigError("max terms must be >= 1");
}

double RunConfig::effective_Y() const { return Y > 0.0 ? Y : std::pow(static_cast<double>(X), 0.05); }

nlohmann::ordered_json RunConfig::result_fields() const {
  nlohmann::ordered_json j;
  j["X"] = X;
  j["theta"] = theta;
  j["vartheta"] = vartheta;
  j["Y"] = effective_Y();
  j["tol"] = tol;
  j["seed"] = seed;
  j["delta"] = delta;
  j["bump_width"] = bump_width ? nlohmann::ordered_json(*bump_width) : nlohmann::ordered_json(nullptr);
  j["alpha1"] = alpha1 ? nlohmann::ordered_json(*alpha1) : nlohmann::ordered_json(nullptr);
  j["alpha2"] = alpha2 ? nlohmann::ordered_json(*alpha2) : nlohmann::ordered_json(nullptr);
  j["third_moment"] = third_moment;
  j["m3_method"] = m3_method;
  j["sieve_mode"] = sieve_mode;
  j["sieve_split"] = sieve_split;
  j["tail_tolerance"] = tail_tolerance;
  j["max_terms"] = max_terms;
  j["output_format"] = to_string(output_format);
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "X") {
      c.X = get_count(v, key);
    } else if (key == "theta") {
      c.theta = get_as<double>(v, key);
    } else if (key == "vartheta") {
      c.vartheta = get_as<double>(v, key);
    } else if (key == "Y") {
      c.Y = get_as<double>(v, key);
    } else if (key == "tol") {
      c.tol = get_as<double>(v, key);
    } else if (key == "workers") {
      const auto w = get_count(v, key);
      if (w < 1 || w > 4096) throw ConfigError("workers must lie in [1, 4096]");
      c.workers = static_cast<unsigned>(w);
    } else if (key == "cache_path") {
      c.cache_path = get_as<std::string>(v, key);
    } else if (key == "output_path") {
      c.output_path = get_as<std::string>(v, key);
    } else if (key == "output_format") {
      c.output_format = parse_output_format(get_as<std::string>(v, key));
    } else if (key == "seed") {
      c.seed = get_count(v, key);
    } else if (key == "delta") {
      c.delta = get_as<double>(v, key);
    } else if (key == "bump_width") {
      c.bump_width = get_as<double>(v, key);
    } else if (key == "alpha1") {
      c.alpha1 = get_as<double>(v, key);
    } else if (key == "alpha2") {
      c.alpha2 = get_as<double>(v, key);
    } else if (key == "third_moment") {
      c.third_moment = get_as<bool>(v, key);
    } else if (key == "m3_method") {
      c.m3_method = get_as<std::string>(v, key);
    } else if (key == "sieve_mode") {
      c.sieve_mode = get_as<bool>(v, key);
    } else if (key == "sieve_split") {
      c.sieve_split = get_as<bool>(v, key);
    } else if (key == "tail_tolerance") {
      c.tail_tolerance = get_as<double>(v, key);
    } else if (key == "max_terms") {
      c.max_terms = get_count(v, key);
    } else if (key == "p") {
      c.p = get_count(v, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  apply_json(config, j);
}

void apply_env(RunConfig& config, const EnvLookup& env) {
  if (const auto w = env("QCENTRAL_WORKERS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(w->c_str(), &end, 10);
    if (w->empty() || *end != '\0' || v < 1 || v > 4096) {
      throw ConfigError("QCENTRAL_WORKERS must be an integer in [1, 4096]");
    }
    config.workers = static_cast<unsigned>(v);
  }
  if (const auto c = env("QCENTRAL_CACHE")) config.cache_path = *c;
}

EnvLookup process_env() {
  return [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

}  // namespace qcentral
