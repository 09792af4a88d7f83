#include "owfplan/timeparse.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace owfplan {

namespace {

// Days from civil date, Howard Hinnant's algorithm (public domain).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

int read_int(const std::string& s, size_t pos, size_t len) {
  int v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || !is_digit(s[i])) {
      throw std::invalid_argument("bad timestamp: '" + s + "'");
    }
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

EpochSeconds parse_iso8601_utc(const std::string& text) {
  // YYYY-MM-DDTHH:MM:SS[Z], 'T' may be a space.
  if (text.size() != 19 && text.size() != 20) {
    throw std::invalid_argument("bad timestamp: '" + text + "'");
  }
  if (text.size() == 20 && text[19] != 'Z') {
    throw std::invalid_argument("bad timestamp (expected trailing Z): '" + text + "'");
  }
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    throw std::invalid_argument("bad timestamp: '" + text + "'");
  }
  const int y = read_int(text, 0, 4);
  const int mo = read_int(text, 5, 2);
  const int d = read_int(text, 8, 2);
  const int h = read_int(text, 11, 2);
  const int mi = read_int(text, 14, 2);
  const int se = read_int(text, 17, 2);
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60) {
    throw std::invalid_argument("bad timestamp (field range): '" + text + "'");
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

std::string format_iso8601_utc(EpochSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::int64_t market_day_index(EpochSeconds t, double tz_offset_hours) {
  const std::int64_t shifted =
      t + static_cast<std::int64_t>(std::llround(tz_offset_hours * 3600.0));
  // floor division
  return shifted >= 0 ? shifted / 86400 : (shifted - 86399) / 86400;
}

EpochSeconds day_start_utc(std::int64_t day_index, double tz_offset_hours) {
  return day_index * 86400 -
         static_cast<std::int64_t>(std::llround(tz_offset_hours * 3600.0));
}

}  // namespace owfplan
