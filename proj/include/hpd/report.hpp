#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hpd/io.hpp"

namespace hpd {

inline constexpr std::string_view kVersion = "0.1.0";

/// Report document {"command", "params", "results", "provenance"}. Provenance
/// holds version, UTC timestamp and the RNG description.
Json make_report(std::string_view command, Json params, Json results);

/// Schema check of a report document; throws ParseError naming the field.
void validate_report(const Json& report);

/// Commands: "depth", "center", "cr", "simulate". params are completed with
/// defaults in place, so the report records every input that affects results.
Json run_command(std::string_view command, Json& params);

/// Copy without provenance timestamps and without keys ending in "_ms".
Json strip_volatile(const Json& j);

/// Re-runs the report's command from its params and returns the JSON
/// pointers where the regenerated results differ (empty when identical).
std::vector<std::string> replay_report(const Json& report);

/// Flat CSV table of a command's results (header line first).
std::string results_csv(std::string_view command, const Json& params, const Json& results);

}  // namespace hpd
