#pragma once

#include <cstddef>
#include <span>

namespace sdct {

inline constexpr double kZ95 = 1.959964;

struct Interval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  double half_width() const { return 0.5 * (hi - lo); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Wilson score interval for k successes out of n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z = kZ95);

/// Mean with a two-sided Student-t interval at the given confidence level.
Interval student_t_interval(std::span<const double> xs, double level = 0.95);

}  // namespace sdct
