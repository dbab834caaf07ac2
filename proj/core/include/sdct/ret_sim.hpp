#pragma once

#include <optional>
#include <vector>

#include "sdct/analytic.hpp"

namespace sdct {

/// Per-level counts A_{t,l} of one simulated RET, rows t = 0..t_max.
std::vector<std::vector<std::size_t>> simulate_ret_levels(const RETParams& ret, int t_max,
                                                          Rng& rng);

struct RetProfileStats {
  std::size_t runs = 0;
  std::vector<std::vector<double>> mean;    // [t][l]
  std::vector<std::vector<double>> stderr_; // standard error of the mean
};

RetProfileStats simulate_ret_profile(const RETParams& ret, int t_max, std::size_t runs,
                                     std::uint64_t seed);

/// Level of the first hospitalized node of a RET grown until a
/// hospitalization; nodes born on the same day are visited in random order.
/// nullopt if nobody is hospitalized within `max_days`.
std::optional<std::size_t> simulate_stopped_ret(const RETParams& ret, Rng& rng,
                                                int max_days = 10000);

/// Histogram of `runs` stopped RETs; runs that never stop are left out.
PathLengthDist stopped_ret_histogram(const RETParams& ret, std::size_t runs,
                                     std::uint64_t seed);

double total_variation(const PathLengthDist& a, const PathLengthDist& b);

}  // namespace sdct
