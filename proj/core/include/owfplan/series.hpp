#pragma once

#include <string>
#include <vector>

#include "owfplan/timeparse.hpp"

namespace owfplan {

enum class PriceKind { DA, RT, ReserveUp, ReserveDown };

const char* to_string(PriceKind kind);
PriceKind price_kind_from_string(const std::string& s);

// A row the loader refused, with the 1-based file row number and why.
struct RejectedRow {
  int row = 0;
  std::string reason;
};

// Uniformly ordered $/MWh series at file-native cadence.
struct PriceSeries {
  PriceKind kind = PriceKind::DA;
  std::vector<EpochSeconds> timestamps;  // strictly increasing
  std::vector<double> values;
  std::vector<RejectedRow> rejected;

  size_t size() const { return timestamps.size(); }
};

// Hub-height wind speeds, m/s, nonnegative.
struct WindSeries {
  std::vector<EpochSeconds> timestamps;
  std::vector<double> speeds_ms;
  std::vector<RejectedRow> rejected;

  size_t size() const { return timestamps.size(); }
};

// CSV loader: header "timestamp,value", ISO-8601 UTC timestamps. Rows whose
// value fails to parse are collected in `rejected` (with row numbers) rather
// than aborting the load; structural problems (missing file, bad header,
// non-monotone or duplicate timestamps) throw.
PriceSeries load_price_csv(const std::string& path, PriceKind kind);

// Same shape; additionally rejects rows with negative speeds.
WindSeries load_wind_csv(const std::string& path);

void write_price_csv(const PriceSeries& series, const std::string& path);
void write_wind_csv(const WindSeries& series, const std::string& path);

}  // namespace owfplan
