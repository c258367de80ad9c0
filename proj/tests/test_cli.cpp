#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "qcentral/cache.hpp"
#include "qcentral/commands.hpp"
#include "qcentral/config.hpp"
#include "qcentral/errors.hpp"
#include "qcentral/report.hpp"

using namespace qcentral;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qcentral_test_" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "_" +
            std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static std::atomic<int>& counter() {
    static std::atomic<int> c{0};
    return c;
  }
  [[nodiscard]] std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void append_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  out << bytes;
}

std::string record_bytes(std::int64_t p, double v) {
  std::string s(16, '\0');
  const auto up = static_cast<std::uint64_t>(p);
  const auto uv = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) {
    s[b] = static_cast<char>((up >> (8 * b)) & 0xff);
    s[8 + b] = static_cast<char>((uv >> (8 * b)) & 0xff);
  }
  return s;
}

// a cheap stand-in for L(1/2, chi_p) in cache tests
double fake_value(std::uint64_t p) { return std::sin(static_cast<double>(p)) + 2.0; }

constexpr std::uint64_t kTestVersion = 0x1234abcdULL;

}  // namespace

TEST_CASE("config sources and precedence") {
  RunConfig c;
  apply_json(c, nlohmann::json::parse(R"({"X": 1000000, "theta": 0.1, "workers": 3, "cache_path": "a.bin",
                                           "output_format": "json", "alpha1": 0.9, "alpha2": 1.0})"));
  CHECK(c.X == 1'000'000);
  CHECK(c.theta == 0.1);
  CHECK(c.workers == 3);
  CHECK(c.output_format == OutputFormat::json);
  CHECK(c.alpha1 == 0.9);

  std::map<std::string, std::string> env{{"QCENTRAL_WORKERS", "5"}, {"QCENTRAL_CACHE", "b.bin"},
                                         {"QCENTRAL_X", "7"}};
  const EnvLookup lookup = [&](const char* k) -> std::optional<std::string> {
    const auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  apply_env(c, lookup);
  CHECK(c.workers == 5);
  CHECK(c.cache_path == "b.bin");
  CHECK(c.X == 1'000'000);  // only workers and cache come from the environment

  env["QCENTRAL_WORKERS"] = "zero";
  CHECK_THROWS_AS(apply_env(c, lookup), ConfigError);
  env["QCENTRAL_WORKERS"] = "0";
  CHECK_THROWS_AS(apply_env(c, lookup), ConfigError);

  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"Xx": 1})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"theta": "big"})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"X": -5})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse("[1, 2]")), ConfigError);

  TempDir dir;
  std::ofstream(dir.file("c.json")) << R"({"vartheta": 0.1, "seed": 7})";
  RunConfig f;
  apply_config_file(f, dir.file("c.json"));
  CHECK(f.vartheta == 0.1);
  CHECK(f.seed == 7);
  std::ofstream(dir.file("bad.json")) << "{not json";
  CHECK_THROWS_AS(apply_config_file(f, dir.file("bad.json")), ConfigError);
  CHECK_THROWS_AS(apply_config_file(f, dir.file("missing.json")), ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate(true));
  c.theta = 0.25;
  c.vartheta = 0.125;
  CHECK_THROWS_AS(c.validate(true), ConfigError);
  CHECK_NOTHROW(c.validate(false));
  c = RunConfig{};
  c.workers = 0;
  CHECK_THROWS_AS(c.validate(false), ConfigError);
  c = RunConfig{};
  c.alpha1 = 0.5;
  CHECK_THROWS_AS(c.validate(false), ConfigError);
  c.alpha2 = 0.4;
  CHECK_THROWS_AS(c.validate(false), ConfigError);
  c = RunConfig{};
  c.bump_width = 0.25;
  CHECK_THROWS_AS(c.validate(false), ConfigError);
  c = RunConfig{};
  c.m3_method = "fast";
  CHECK_THROWS_AS(c.validate(false), ConfigError);

  CHECK(RunConfig{}.effective_Y() == doctest::Approx(std::pow(1e4, 0.05)));
  CHECK(parse_output_format("json") == OutputFormat::json);
  CHECK_THROWS_AS((void)parse_output_format("xml"), ConfigError);

  RunConfig a, b;
  b.workers = 8;
  b.cache_path = "x";
  b.output_path = "y";
  CHECK(a.result_fields().dump() == b.result_fields().dump());
  b.theta = 0.1;
  CHECK(a.result_fields().dump() != b.result_fields().dump());
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5e17, 0.17409}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
    CHECK(s.find(',') == std::string::npos);
  }
}

TEST_CASE("cache basics") {
  TempDir dir;
  const std::string path = dir.file("l.bin");
  double first = 0.0;
  {
    LValueCache cache(path, kTestVersion);
    CHECK(cache.size() == 0);
    first = cache.get_or_compute(17, [] { return fake_value(17); });
    CHECK(cache.misses() == 1);
    CHECK(cache.get_or_compute(17, [] { return -1.0; }) == first);
    CHECK(cache.hits() == 1);
    (void)cache.get_or_compute(41, [] { return fake_value(41); });
  }
  CHECK(fs::file_size(path) == 16 * 3);  // header + 2 records
  {
    LValueCache warm(path, kTestVersion);
    CHECK(!warm.invalidated());
    CHECK(warm.size() == 2);
    double v = 0.0;
    CHECK(warm.find(17, v));
    CHECK(std::bit_cast<std::uint64_t>(v) == std::bit_cast<std::uint64_t>(first));
    CHECK(!warm.find(73, v));
  }
  const auto recs = read_cache_records(path);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].p == -1);
  CHECK(std::bit_cast<std::uint64_t>(recs[0].value) == kTestVersion);
  CHECK(recs[1].p == 17);

  // another version invalidates with a warning
  std::string warned;
  {
    LValueCache other(path, kTestVersion + 1, [&](const std::string& m) { warned = m; });
    CHECK(other.invalidated());
    CHECK(other.size() == 0);
  }
  CHECK(!warned.empty());
  CHECK(fs::file_size(path) == 16);

  // a torn trailing record is dropped
  {
    LValueCache c(path, kTestVersion + 1);
    (void)c.get_or_compute(89, [] { return fake_value(89); });
  }
  append_bytes(path, std::string(7, '\x01'));
  {
    LValueCache c(path, kTestVersion + 1);
    CHECK(c.size() == 1);
    (void)c.get_or_compute(97, [] { return fake_value(97); });
  }
  CHECK(fs::file_size(path) == 16 * 3);
  CHECK(read_cache_records(path).back().p == 97);
}

TEST_CASE("cache corruption is an error") {
  TempDir dir;
  const std::string path = dir.file("bad.bin");
  { LValueCache c(path, kTestVersion); }
  append_bytes(path, record_bytes(19, 1.0));  // 19 is not 1 mod 8
  CHECK_THROWS_AS(LValueCache(path, kTestVersion), ResourceError);

  const std::string nan_path = dir.file("nan.bin");
  { LValueCache c(nan_path, kTestVersion); }
  append_bytes(nan_path, record_bytes(17, NAN));
  CHECK_THROWS_AS(LValueCache(nan_path, kTestVersion), ResourceError);

  const std::string headless = dir.file("headless.bin");
  append_bytes(headless, record_bytes(17, 1.0));
  CHECK_THROWS_AS(LValueCache(headless, kTestVersion), ResourceError);

  const PrimeTable table(1000);
  LValueCache ok(dir.file("ok.bin"), kTestVersion);
  CHECK_THROWS_AS((void)lvalue_cache_get_or_compute(13, ok, OmegaWeights::standard(), table), DomainError);
  CHECK_THROWS_AS((void)lvalue_cache_get_or_compute(33, ok, OmegaWeights::standard(), table), DomainError);
}

TEST_CASE("cache under concurrent access") {
  TempDir dir;
  const std::string path = dir.file("c.bin");
  std::vector<std::uint64_t> keys;
  for (std::uint64_t p = 17; keys.size() < 400; p += 8) keys.push_back(p);  // the cache only checks p mod 8

  LValueCache cache(path, kTestVersion);
  std::atomic<bool> done{false};
  std::atomic<std::uint64_t> reader_bad{0};
  std::atomic<std::uint64_t> reader_passes{0};
  // a second reader that parses the file while it grows
  std::thread reader([&] {
    while (!done.load()) {
      const auto recs = read_cache_records(path);
      for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto p = static_cast<std::uint64_t>(recs[i].p);
        if (recs[i].p <= 0 || p % 8 != 1 || recs[i].value != fake_value(p)) ++reader_bad;
      }
      ++reader_passes;
    }
  });
  std::vector<std::thread> workers;
  std::atomic<std::uint64_t> wrong{0};
  for (int t = 0; t < 8; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        const std::uint64_t p = keys[(i * 7 + static_cast<std::size_t>(t) * 13) % keys.size()];
        if (cache.get_or_compute(p, [p] { return fake_value(p); }) != fake_value(p)) ++wrong;
      }
    });
  }
  for (auto& w : workers) w.join();
  done = true;
  reader.join();
  CHECK(wrong == 0);
  CHECK(reader_bad == 0);
  CHECK(reader_passes > 0);
  CHECK(cache.size() == keys.size());
  CHECK(cache.hits() + cache.misses() == 8 * keys.size());

  const auto recs = read_cache_records(path);
  CHECK(fs::file_size(path) == 16 * recs.size());
  CHECK(recs.size() == keys.size() + 1);
  double checksum = 0.0, expect = 0.0;
  std::map<std::int64_t, int> seen;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    checksum += recs[i].value;
    ++seen[recs[i].p];
  }
  for (std::uint64_t p : keys) expect += fake_value(p);
  CHECK(checksum == doctest::Approx(expect).epsilon(1e-14));
  CHECK(seen.size() == keys.size());
}

TEST_CASE("census command") {
  RunConfig c;
  c.X = 100;
  std::ostringstream out, err;
  CHECK(cmd_census(c, out, err) == kExitOk);
  std::istringstream rows(out.str());
  std::string line;
  std::getline(rows, line);
  CHECK(line == "p,L,nonzero_flag");
  std::vector<std::string> ps;
  while (std::getline(rows, line)) ps.push_back(line.substr(0, line.find(',')));
  CHECK(ps == std::vector<std::string>{"17", "41", "73", "89", "97"});
  CHECK(err.str().find("\"proportion\"") != std::string::npos);

  TempDir dir;
  c.X = 20'000;
  c.cache_path = dir.file("cache.bin");
  std::vector<std::string> outputs;
  for (unsigned w : {1u, 4u, 1u, 8u}) {  // cold, then warm runs
    c.workers = w;
    c.output_path = dir.file("census_" + std::to_string(outputs.size()) + ".csv");
    std::ostringstream o, e;
    REQUIRE(cmd_census(c, o, e) == kExitOk);
    outputs.push_back(slurp(c.output_path) + slurp(c.output_path + ".summary.json"));
    CHECK(fs::exists(c.output_path + ".run.json"));
  }
  for (const auto& s : outputs) CHECK(s == outputs[0]);
  CHECK(fs::file_size(c.cache_path) % 16 == 0);

  c.output_format = OutputFormat::json;
  c.output_path.clear();
  std::ostringstream jo, je;
  CHECK(cmd_census(c, jo, je) == kExitOk);
  const auto j = nlohmann::json::parse(jo.str());
  CHECK(j.contains("rows"));
  CHECK(j["proportion"].get<double>() == 1.0);
}

TEST_CASE("moments command") {
  RunConfig c;
  c.X = 20'000;
  c.output_format = OutputFormat::json;
  c.alpha1 = 0.9;
  c.alpha2 = 1.0;
  c.sieve_mode = true;
  std::string first;
  for (unsigned w : {1u, 4u, 8u}) {
    c.workers = w;
    std::ostringstream out, err;
    REQUIRE(cmd_moments(c, out, err) == kExitOk);
    if (first.empty()) first = out.str();
    CHECK(out.str() == first);
    CHECK(err.str().rfind("run: ", 0) == 0);
  }
  const auto j = nlohmann::json::parse(first);
  CHECK(j.contains("versions"));
  CHECK(j.dump().find("worker") == std::string::npos);

  c.output_format = OutputFormat::csv;
  std::ostringstream csv, e2;
  REQUIRE(cmd_moments(c, csv, e2) == kExitOk);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);

  c.theta = 0.25;
  c.vartheta = 0.125;
  std::ostringstream o3, e3;
  CHECK(cmd_moments(c, o3, e3) == kExitConfigError);
  CHECK(e3.str().find("theta + 2 vartheta") != std::string::npos);
}

TEST_CASE("optimize and lvalue commands") {
  RunConfig c;
  std::ostringstream out, err;
  CHECK(cmd_optimize(c, out, err) == kExitOk);
  CHECK(out.str().rfind("theta0,0.17409", 0) == 0);
  CHECK(out.str().find("\ntheta,rho\n0,0\n") != std::string::npos);

  c.p = 17;
  std::ostringstream lo, le;
  CHECK(cmd_lvalue(c, lo, le) == kExitOk);
  CHECK(lo.str().rfind("p,L,terms_used,xi_max,tail_estimate\n17,", 0) == 0);
  c.p = 19;
  std::ostringstream bo, be;
  CHECK(cmd_lvalue(c, bo, be) == kExitConfigError);

  TempDir dir;
  c.p = 17;
  c.cache_path = dir.file("bad.bin");
  append_bytes(c.cache_path, "garbage-garbage-");
  std::ostringstream co, ce;
  CHECK(cmd_lvalue(c, co, ce) == kExitResourceError);
  CHECK(ce.str().find("cache") != std::string::npos);
}
