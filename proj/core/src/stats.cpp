#include "sdct/stats.hpp"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "sdct/types.hpp"

namespace sdct {

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) throw ParameterError("wilson: no trials");
  if (k > n) throw ParameterError("wilson: more successes than trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Interval student_t_interval(std::span<const double> xs, double level) {
  if (xs.empty()) throw ParameterError("student_t: empty sample");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() == 1) return {mean, mean, mean};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (n - 1) / n);
  const boost::math::students_t dist(n - 1);
  const double t = boost::math::quantile(boost::math::complement(dist, (1 - level) / 2));
  return {mean, mean - t * se, mean + t * se};
}

}  // namespace sdct
