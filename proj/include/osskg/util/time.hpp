#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace osskg {

using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DD" and "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]".
/// 'T' may be lowercase or a space; no zone designator means UTC. Returns
/// nullopt for anything else, including out-of-range fields.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp t);

/// "YYYY-MM" or "YYYY".
std::string month_bucket(Timestamp t);
std::string year_bucket(Timestamp t);

/// Whole days between two instants, floored; requires later >= earlier.
long long floor_days(Timestamp earlier, Timestamp later);

}  // namespace osskg
