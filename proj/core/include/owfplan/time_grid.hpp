#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace owfplan {

// Two-level market clock for one trading day: hourly intervals (day-ahead
// granularity) and quarter-hour intervals (real-time / reserve granularity).
// Indices are 0-based; hour h owns quarters {4h, 4h+1, 4h+2, 4h+3}.
class TimeGrid {
 public:
  // A standard day has 24 hours / 96 quarters; tests use shorter analogs.
  explicit TimeGrid(int hours = 24);

  int hours() const { return hours_; }
  int quarters() const { return 4 * hours_; }
  double quarter_length_h() const { return 0.25; }

  // The four quarter indices belonging to `hour`. Throws std::domain_error
  // when hour is outside [0, hours()).
  std::array<int, 4> quarters_of_hour(int hour) const;

  // Owning hour of a quarter index. Throws std::domain_error out of range.
  int hour_of_quarter(int quarter) const;

 private:
  int hours_;
};

}  // namespace owfplan
