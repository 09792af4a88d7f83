#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "owfplan/series.hpp"

namespace owfplan {

// One market day of model-ready inputs: hourly DA prices and wind, quarter
// hour RT and reserve prices.
struct DayData {
  std::int64_t day_index = 0;       // market-day index (days since epoch, shifted)
  std::string date;                 // YYYY-MM-DD of the market day start
  std::array<double, 24> da_price{};        // $/MWh
  std::array<double, 96> rt_price{};        // $/MWh
  std::array<double, 96> reserve_up_price{};    // $/MWh
  std::array<double, 96> reserve_down_price{};  // $/MWh
  std::array<double, 24> wind_ms{};         // hub-height m/s, hourly mean
  int forward_filled_intervals = 0;  // gaps repaired by the <=2-interval policy
};

struct DayInputs {
  const PriceSeries* da = nullptr;
  const PriceSeries* rt = nullptr;
  const PriceSeries* reserve_up = nullptr;
  const PriceSeries* reserve_down = nullptr;
  const WindSeries* wind = nullptr;
};

// Bins every series onto the market day's grid (mean aggregation within each
// bin). Bins with no samples are gaps: runs of at most 2 consecutive gaps are
// forward-filled (counted in the result), longer runs or leading gaps throw
// with the missing intervals listed.
DayData align_day(const DayInputs& inputs, std::int64_t market_day,
                  double tz_offset_hours);

// "YYYY-MM-DD" -> market-day index under the given offset.
std::int64_t market_day_from_date(const std::string& date,
                                  double tz_offset_hours);

// {poi, year, kind}->path mapping, stored as JSON next to the data files.
struct DataManifest {
  std::string poi;
  int year = 0;
  std::string da_path, rt_path, reserve_up_path, reserve_down_path, wind_path;
};

DataManifest load_data_manifest(const std::string& path);

// Aligns every market day fully covered by all five series.
std::vector<DayData> align_all_days(const DayInputs& inputs,
                                    double tz_offset_hours);

std::string dayset_to_json(const std::vector<DayData>& days,
                           const std::string& poi);
std::vector<DayData> dayset_from_json(const std::string& text,
                                      std::string* poi = nullptr);

}  // namespace owfplan
