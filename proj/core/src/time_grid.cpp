#include "owfplan/time_grid.hpp"

#include <stdexcept>
#include <string>

namespace owfplan {

TimeGrid::TimeGrid(int hours) : hours_(hours) {
  if (hours <= 0) {
    throw std::invalid_argument("TimeGrid: hour count must be positive, got " +
                                std::to_string(hours));
  }
}

std::array<int, 4> TimeGrid::quarters_of_hour(int hour) const {
  if (hour < 0 || hour >= hours_) {
    throw std::domain_error("TimeGrid: hour " + std::to_string(hour) +
                            " outside [0," + std::to_string(hours_) + ")");
  }
  return {4 * hour, 4 * hour + 1, 4 * hour + 2, 4 * hour + 3};
}

int TimeGrid::hour_of_quarter(int quarter) const {
  if (quarter < 0 || quarter >= quarters()) {
    throw std::domain_error("TimeGrid: quarter " + std::to_string(quarter) +
                            " outside [0," + std::to_string(quarters()) + ")");
  }
  return quarter / 4;
}

}  // namespace owfplan
