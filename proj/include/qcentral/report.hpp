#pragma once

// Serialization of census and moment results. The main outputs depend only
// on the configuration and the computed values; wall-clock time and worker
// count go to a separate `<output>.run.json` file.

#include <string>

#include <json.hpp>

#include "qcentral/config.hpp"
#include "qcentral/lcentral.hpp"
#include "qcentral/moments.hpp"

namespace qcentral {

inline constexpr const char* kVersion = "1.0.0";
/// The proven lower bound on the nonvanishing proportion.
inline constexpr double kNonvanishingFloor = 0.0964;

/// %.17g; non-finite values print as nan / inf / -inf.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] nlohmann::ordered_json versions_json(std::uint64_t weights_version, std::uint64_t cache_version);

/// "p,L,nonzero_flag" then one row per prime.
[[nodiscard]] std::string census_csv(const CensusRecord& rec);
[[nodiscard]] nlohmann::ordered_json census_summary_json(const CensusRecord& rec, const RunConfig& config,
                                                         const nlohmann::ordered_json& versions);
/// Summary plus a "rows" array of [p, L, nonzero_flag].
[[nodiscard]] nlohmann::ordered_json census_json(const CensusRecord& rec, const RunConfig& config,
                                                 const nlohmann::ordered_json& versions);

[[nodiscard]] nlohmann::ordered_json moment_report_json(const MomentReport& r, const RunConfig& config,
                                                        const nlohmann::ordered_json& versions);
/// Header line and one data row.
[[nodiscard]] std::string moment_report_csv(const MomentReport& r);

[[nodiscard]] nlohmann::ordered_json run_metadata(double runtime_seconds, unsigned workers);

/// Writes through a temporary file and a rename. Throws ResourceError.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qcentral
