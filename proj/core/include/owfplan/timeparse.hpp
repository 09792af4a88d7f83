#pragma once

#include <cstdint>
#include <string>

namespace owfplan {

// Seconds since the Unix epoch, UTC.
using EpochSeconds = std::int64_t;

// Parses "YYYY-MM-DDTHH:MM:SS" with optional trailing 'Z'. Throws
// std::invalid_argument on any malformed input (no locale involvement).
EpochSeconds parse_iso8601_utc(const std::string& text);

// Inverse of parse_iso8601_utc, always with trailing 'Z'.
std::string format_iso8601_utc(EpochSeconds t);

// Days since epoch of the market day containing t, after shifting by the
// configured offset (positive offset moves the day boundary west of UTC).
std::int64_t market_day_index(EpochSeconds t, double tz_offset_hours);

EpochSeconds day_start_utc(std::int64_t day_index, double tz_offset_hours);

}  // namespace owfplan
