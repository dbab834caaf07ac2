#include "sdct/ret_sim.hpp"

#include <cmath>

namespace sdct {

namespace {

std::size_t binomial(Rng& rng, std::size_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return std::binomial_distribution<std::size_t>(trials, p)(rng);
}

// Free child slots per level; the root owns d_r, everybody else d.
struct RetGrowth {
  const RETParams& ret;
  std::vector<std::size_t> count{1};
  std::vector<std::size_t> free_slots;

  explicit RetGrowth(const RETParams& r)
      : ret(r), free_slots{static_cast<std::size_t>(std::llround(r.d_r))} {}

  // Grows one day and returns the newborns per level.
  std::vector<std::size_t> grow(Rng& rng) {
    std::vector<std::size_t> born(count.size() + 1, 0);
    for (std::size_t l = 0; l < count.size(); ++l) born[l + 1] = binomial(rng, free_slots[l], ret.p_i);
    if (born.back() == 0) born.pop_back();
    const auto d = static_cast<std::size_t>(std::llround(ret.d));
    for (std::size_t l = 1; l < born.size(); ++l) {
      if (!born[l]) continue;
      free_slots[l - 1] -= born[l];
      if (l >= count.size()) {
        count.resize(l + 1, 0);
        free_slots.resize(l + 1, 0);
      }
      count[l] += born[l];
      free_slots[l] += born[l] * d;
    }
    return born;
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> simulate_ret_levels(const RETParams& ret, int t_max,
                                                          Rng& rng) {
  ret.validate();
  RetGrowth tree(ret);
  std::vector<std::vector<std::size_t>> rows{tree.count};
  for (int t = 1; t <= t_max; ++t) {
    tree.grow(rng);
    rows.push_back(tree.count);
  }
  return rows;
}

RetProfileStats simulate_ret_profile(const RETParams& ret, int t_max, std::size_t runs,
                                     std::uint64_t seed) {
  RetProfileStats out;
  out.runs = runs;
  const auto T = static_cast<std::size_t>(t_max);
  std::vector<std::vector<double>> sum(T + 1, std::vector<double>(T + 1, 0.0));
  auto sq = sum;
  Rng rng(seed);
  for (std::size_t r = 0; r < runs; ++r) {
    const auto rows = simulate_ret_levels(ret, t_max, rng);
    for (std::size_t t = 0; t <= T; ++t) {
      for (std::size_t l = 0; l < rows[t].size() && l <= T; ++l) {
        const auto x = static_cast<double>(rows[t][l]);
        sum[t][l] += x;
        sq[t][l] += x * x;
      }
    }
  }
  out.mean = sum;
  out.stderr_ = sum;
  const auto n = static_cast<double>(runs);
  for (std::size_t t = 0; t <= T; ++t) {
    for (std::size_t l = 0; l <= T; ++l) {
      const double m = sum[t][l] / n;
      const double var = runs > 1 ? std::max(0.0, (sq[t][l] - n * m * m) / (n - 1)) : 0.0;
      out.mean[t][l] = m;
      out.stderr_[t][l] = std::sqrt(var / n);
    }
  }
  return out;
}

std::optional<std::size_t> simulate_stopped_ret(const RETParams& ret, Rng& rng, int max_days) {
  ret.validate();
  const double hosp = (1.0 - ret.p_a) * ret.p_h;
  if (bernoulli(rng, hosp)) return 0;
  RetGrowth tree(ret);
  for (int t = 1; t <= max_days; ++t) {
    const auto born = tree.grow(rng);
    std::size_t total = 0;
    for (auto b : born) total += b;
    if (total == 0 || binomial(rng, total, hosp) == 0) continue;
    // The first hospitalized in a uniform order is a uniform newborn.
    auto pick = uniform_index(rng, total);
    for (std::size_t l = 0; l < born.size(); ++l) {
      if (pick < born[l]) return l;
      pick -= born[l];
    }
  }
  return std::nullopt;
}

PathLengthDist stopped_ret_histogram(const RETParams& ret, std::size_t runs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> lengths;
  lengths.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    if (auto l = simulate_stopped_ret(ret, rng)) lengths.push_back(*l);
  }
  return PathLengthDist::empirical(lengths);
}

double total_variation(const PathLengthDist& a, const PathLengthDist& b) {
  const auto n = std::max(a.pmf.size(), b.pmf.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a.at(i) - b.at(i));
  return 0.5 * s;
}

}  // namespace sdct
