#include "owfplan/series.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace owfplan {

const char* to_string(PriceKind kind) {
  switch (kind) {
    case PriceKind::DA: return "da";
    case PriceKind::RT: return "rt";
    case PriceKind::ReserveUp: return "reserve_up";
    case PriceKind::ReserveDown: return "reserve_down";
  }
  return "?";
}

PriceKind price_kind_from_string(const std::string& s) {
  if (s == "da") return PriceKind::DA;
  if (s == "rt") return PriceKind::RT;
  if (s == "reserve_up") return PriceKind::ReserveUp;
  if (s == "reserve_down") return PriceKind::ReserveDown;
  throw std::invalid_argument("unknown price kind: '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string shortest_repr(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

struct RawRows {
  std::vector<EpochSeconds> timestamps;
  std::vector<std::string> values;
  std::vector<int> rows;  // 1-based file row of each entry
};

RawRows read_timestamp_value_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("csv file is empty: " + path);
  }
  if (trim(line) != "timestamp,value") {
    throw std::runtime_error("malformed header in " + path +
                             " (expected 'timestamp,value', got '" +
                             trim(line) + "')");
  }
  RawRows raw;
  int row = 1;
  EpochSeconds prev = 0;
  bool have_prev = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const size_t comma = t.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(row) +
                               ": expected 'timestamp,value'");
    }
    const EpochSeconds ts = [&] {
      try {
        return parse_iso8601_utc(trim(t.substr(0, comma)));
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ":" + std::to_string(row) + ": " +
                                 e.what());
      }
    }();
    if (have_prev) {
      if (ts == prev) {
        throw std::runtime_error(path + ":" + std::to_string(row) +
                                 ": duplicated timestamp " +
                                 format_iso8601_utc(ts));
      }
      if (ts < prev) {
        throw std::runtime_error(path + ":" + std::to_string(row) +
                                 ": timestamps not increasing at " +
                                 format_iso8601_utc(ts));
      }
    }
    prev = ts;
    have_prev = true;
    raw.timestamps.push_back(ts);
    raw.values.push_back(t.substr(comma + 1));
    raw.rows.push_back(row);
  }
  return raw;
}

}  // namespace

PriceSeries load_price_csv(const std::string& path, PriceKind kind) {
  RawRows raw = read_timestamp_value_csv(path);
  PriceSeries out;
  out.kind = kind;
  for (size_t i = 0; i < raw.timestamps.size(); ++i) {
    double v;
    if (!parse_double(raw.values[i], v)) {
      out.rejected.push_back({raw.rows[i], "unparseable value '" +
                                               trim(raw.values[i]) + "'"});
      continue;
    }
    out.timestamps.push_back(raw.timestamps[i]);
    out.values.push_back(v);
  }
  return out;
}

WindSeries load_wind_csv(const std::string& path) {
  RawRows raw = read_timestamp_value_csv(path);
  WindSeries out;
  for (size_t i = 0; i < raw.timestamps.size(); ++i) {
    double v;
    if (!parse_double(raw.values[i], v)) {
      out.rejected.push_back({raw.rows[i], "unparseable value '" +
                                               trim(raw.values[i]) + "'"});
      continue;
    }
    if (v < 0.0) {
      out.rejected.push_back({raw.rows[i], "negative wind speed"});
      continue;
    }
    out.timestamps.push_back(raw.timestamps[i]);
    out.speeds_ms.push_back(v);
  }
  return out;
}

void write_price_csv(const PriceSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  out << "timestamp,value\n";
  for (size_t i = 0; i < series.size(); ++i) {
    out << format_iso8601_utc(series.timestamps[i]) << ","
        << shortest_repr(series.values[i]) << "\n";
  }
}

void write_wind_csv(const WindSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  out << "timestamp,value\n";
  for (size_t i = 0; i < series.size(); ++i) {
    out << format_iso8601_utc(series.timestamps[i]) << ","
        << shortest_repr(series.speeds_ms[i]) << "\n";
  }
}

}  // namespace owfplan
