#include <cmath>
#include <tuple>

#include "doctest.h"
#include "sdct/analytic.hpp"
#include "sdct/network.hpp"

using namespace sdct;

namespace {

// Probability, over independent asymptomatic flags (probability p each,
// the last node always symptomatic), that the source is symptomatic and
// every household touched by the path has a symptomatic path node.
double predicate_probability(const RBTree& t, const std::vector<NodeId>& path, double p) {
  const std::size_t free = path.size() - 1;
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << free); ++mask) {
    double w = 1.0;
    auto sym = [&](std::size_t i) { return i == free || !((mask >> i) & 1u); };
    for (std::size_t i = 0; i < free; ++i) w *= sym(i) ? 1 - p : p;
    bool ok = sym(0);
    for (std::size_t i = 0; ok && i < path.size(); ++i) {
      bool covered = false;
      for (std::size_t j = 0; j < path.size(); ++j) {
        if (t.household_of(path[j]) == t.household_of(path[i]) && sym(j)) covered = true;
      }
      ok = covered;
    }
    if (ok) total += w;
  }
  return total;
}

// Average of predicate_probability over every root path of length n.
double brute_force_ls_plus(std::size_t dc, std::size_t dh, unsigned n, double p) {
  RBTree t(dc, dh);
  std::vector<std::vector<NodeId>> paths{{RBTree::kRoot}};
  for (unsigned k = 0; k < n; ++k) {
    std::vector<std::vector<NodeId>> next;
    for (const auto& path : paths) {
      for (NodeId c : t.children(path.back())) {
        next.push_back(path);
        next.back().push_back(c);
      }
    }
    paths = std::move(next);
  }
  double sum = 0.0;
  for (const auto& path : paths) sum += predicate_probability(t, path, p);
  return sum / static_cast<double>(paths.size());
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("conditional asymptomatic probability") {
    CHECK(p_cond(0.0, 0.3) == 0.0);
    CHECK(p_cond(0.4, 0.0) == doctest::Approx(0.4));
    CHECK(p_cond(0.5, 0.5) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(p_cond(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(p_cond(-0.1, 0.5), ParameterError);
  }

  TEST_CASE("path counts") {
    for (std::size_t dc = 1; dc <= 5; ++dc) {
      for (std::size_t dh = 1; dh <= 5; ++dh) {
        const auto rb = RBTreeParams::from(dc, dh);
        CHECK(rb_path_count(0, rb) == doctest::Approx(1));
        CHECK(rb_path_count(1, rb) == doctest::Approx(dc + dh));
        for (unsigned n = 0; n <= 30; ++n) {
          const double exact = rb_path_count_recurrence(n, dc, dh).convert_to<double>();
          CHECK(rb_path_count(n, rb) == doctest::Approx(exact).epsilon(1e-9));
          CHECK(rb_path_count_closed_exact(n, dc, dh) == rb_path_count_recurrence(n, dc, dh));
        }
      }
    }
    CHECK(rb_path_count_recurrence(2, 3, 2) == 18);
  }

  TEST_CASE("path class counts") {
    CHECK(rb_path_class_count(0, 1, 0, 0, 3, 2) == 1);
    CHECK(rb_path_class_count(1, 0, 1, 1, 3, 2) == 2);
    CHECK(rb_path_class_count(1, 2, 0, 0, 3, 2) == 3);
    for (std::size_t dc = 1; dc <= 5; ++dc) {
      for (std::size_t dh = 1; dh <= 5; ++dh) {
        for (unsigned n = 0; n <= 15; ++n) {
          BigInt sum = 0;
          for (unsigned k = 0; k <= n + 1; ++k)
            for (unsigned a = 0; a <= 1; ++a)
              for (unsigned b = 0; b <= 1; ++b) sum += rb_path_class_count(n, k, a, b, dc, dh);
          CHECK(sum == rb_path_count_recurrence(n, dc, dh));
        }
      }
    }
  }

  TEST_CASE("LS success") {
    const auto d2 = PathLengthDist::point(2);
    CHECK(ls_success(d2, 1.0 / 3.0) == doctest::Approx(4.0 / 9.0));
    CHECK(ls_success(PathLengthDist::point(0), 0.7) == doctest::Approx(1));
    PathLengthDist mix{{0.2, 0.5, 0.3}};
    CHECK(ls_success(mix, 0.0) == doctest::Approx(1));
    CHECK(ls_success(mix, 0.5) == doctest::Approx(0.2 + 0.25 + 0.075));
  }

  TEST_CASE("LS+ lower bound") {
    const auto rb = RBTreeParams::from(3, 2);
    PathLengthDist mix{{0.1, 0.2, 0.3, 0.2, 0.1, 0.1}};
    CHECK(ls_plus_success_lb(mix, 0.0, rb) == doctest::Approx(1));
    CHECK(ls_plus_success_lb(PathLengthDist::point(0), 0.4, rb) == doctest::Approx(1));
    CHECK(ls_plus_success_lb(PathLengthDist::point(1), 0.4, rb) == doctest::Approx(0.6));
    CHECK(ls_plus_success_lb_as_printed(PathLengthDist::point(1), 0.4, rb) ==
          doctest::Approx(0.6));
    // LS+ never does worse than LS on the same distribution.
    for (double p : {0.1, 0.3, 0.6, 0.9}) {
      CHECK(ls_plus_success_lb(mix, p, rb) >= ls_success(mix, p) - 1e-12);
    }
  }

  TEST_CASE("LS+ lower bound equals the path predicate probability") {
    for (auto [dc, dh] : {std::pair{3, 2}, std::pair{2, 1}, std::pair{1, 2}, std::pair{4, 3}}) {
      const auto rb = RBTreeParams::from(dc, dh);
      for (unsigned n = 0; n <= 6; ++n) {
        for (double p : {0.2, 0.55, 0.9}) {
          CHECK(ls_plus_success_lb(PathLengthDist::point(n), p, rb) ==
                doctest::Approx(brute_force_ls_plus(dc, dh, n, p)).epsilon(1e-9));
        }
      }
    }
  }

  TEST_CASE("success probabilities do not increase with p") {
    const auto rb = RBTreeParams::from(3, 2);
    Rng rng(51);
    for (int round = 0; round < 20; ++round) {
      PathLengthDist d;
      double mass = 0;
      for (int i = 0; i < 10; ++i) {
        d.pmf.push_back(std::uniform_real_distribution<>(0, 1)(rng));
        mass += d.pmf.back();
      }
      for (auto& x : d.pmf) x /= mass;
      double prev_ls = 2, prev_plus = 2;
      for (int step = 0; step <= 20; ++step) {
        const double p = step / 20.0;
        const double ls = ls_success(d, p), plus = ls_plus_success_lb(d, p, rb);
        CHECK(ls <= prev_ls + 1e-12);
        CHECK(plus <= prev_plus + 1e-12);
        prev_ls = ls;
        prev_plus = plus;
      }
    }
  }

  TEST_CASE("expected RET profile") {
    RETParams ret;
    ret.p_i = rescaled_p_i(0.1, 3);
    CHECK(ret.p_i == doctest::Approx(0.271));
    for (int t = 0; t <= 10; ++t) CHECK(ret_expected_profile(t, 0, ret) == 1.0);
    CHECK(ret_expected_profile(3, 4, ret) == 0.0);
    CHECK(ret_expected_profile(1, 1, ret) == doctest::Approx(5 * 0.271));
    CHECK(ret_expected_size(0, ret) == 1.0);
    CHECK(ret_expected_size(1, ret) == doctest::Approx(1 + 5 * 0.271));
    for (double d : {1.0, 2.0, 4.0}) {
      ret.d = d;
      for (int t = 0; t <= 20; ++t) {
        double sum = 0;
        for (int l = 0; l <= t; ++l) sum += ret_expected_profile(t, l, ret);
        CHECK(sum == doctest::Approx(ret_expected_size(t, ret)).epsilon(1e-12));
      }
    }
    ret.d = 1;
    CHECK(ret_expected_size(7, ret) == doctest::Approx(1 + 5 * 0.271 * 7));
  }

  TEST_CASE("stopped DET") {
    // Root on day 0, then one more node per day on level 1.
    DETProfile toy;
    for (int t = 0; t < 400; ++t) toy.rows.push_back({1.0, static_cast<double>(t)});
    const auto d = det_path_length_dist(toy, 0.5, 0.2);
    CHECK(d.at(0) == doctest::Approx(0.1));
    CHECK(d.at(1) == doctest::Approx(0.9).epsilon(1e-8));
    CHECK(d.total() == doctest::Approx(1).epsilon(1e-6));

    const auto sure = det_path_length_dist(toy, 0.0, 1.0);
    CHECK(sure.at(0) == 1.0);

    RETParams ret;
    ret.p_i = rescaled_p_i(0.1, 3);
    const auto approx = ret_path_length_approx(ret);
    for (double x : approx.pmf) CHECK(x >= 0.0);
    CHECK(approx.total() <= 1 + 1e-6);
    CHECK(approx.total() >= 1 - 1e-6);
    CHECK(approx.at(0) == doctest::Approx(0.1));
    CHECK(approx.at(1) == doctest::Approx(0.24544).epsilon(1e-4));
    CHECK(approx.at(2) == doctest::Approx(0.29973).epsilon(1e-4));

    ret.p_a = 0;
    ret.p_h = 0.99;
    const auto fast = ret_path_length_approx(ret);
    CHECK(fast.at(0) + fast.at(1) > 0.99);
  }

  TEST_CASE("DET on the expected profile matches the incremental form") {
    RETParams ret;
    ret.p_i = 0.3;
    ret.d_r = 3;
    ret.d = 2;
    DETProfile prof;
    for (int t = 0; t < 200; ++t) {
      std::vector<double> row;
      for (int l = 0; l <= t; ++l) row.push_back(ret_expected_profile(t, l, ret));
      prof.rows.push_back(row);
    }
    const auto a = det_path_length_dist(prof, ret.p_a, ret.p_h);
    const auto b = ret_path_length_approx(ret);
    for (std::size_t n = 0; n < 12; ++n) CHECK(a.at(n) == doctest::Approx(b.at(n)).epsilon(1e-9));
  }

  TEST_CASE("RET approximation against its summed closed form") {
    for (auto [p_i, d_r, d] : {std::tuple{0.271, 5.0, 4.0}, std::tuple{0.4, 3.0, 2.0}}) {
      RETParams ret;
      ret.p_i = p_i;
      ret.d_r = d_r;
      ret.d = d;
      const double hosp = (1 - ret.p_a) * ret.p_h, q = 1 - hosp;
      const double rho = 1 - p_i + d * p_i;
      const auto approx = ret_path_length_approx(ret);
      CHECK(approx.at(0) == doctest::Approx(hosp));
      for (int l = 1; l <= 10; ++l) {
        double sum = 0;
        for (int t = l; t < 400; ++t) {
          const double born = std::pow(rho, t - 1);
          const double before = 1 + d_r * (born - 1) / (d - 1);
          sum += std::exp(std::lgamma(t) - std::lgamma(l) - std::lgamma(t - l + 1)) *
                 std::pow(1 - p_i, t - l) / born * std::pow(q, before) *
                 (1 - std::pow(q, d_r * p_i * born));
        }
        CHECK(approx.at(l) == doctest::Approx(std::pow(p_i * d, l - 1) * sum).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("back-of-the-envelope estimate") {
    CHECK(boe_success(4, 0.1, 0.0, 0.3) == doctest::Approx(1));
    CHECK(boe_success(4, 0.1, 1.0, 0.3) == 0.0);
    // Integer exponent: d p_i = 1 and 1 + 1/((1-p_a)p_h) = 4 give t - 1 = 2,
    // so the binomial sum can be written out term by term.
    const double p_a = 1.0 / 3.0, p_h = 0.5;
    double sum = 0;
    for (int j = 0; j <= 2; ++j) sum += std::tgamma(3) / (std::tgamma(j + 1) * std::tgamma(3 - j)) *
                                         0.25 * std::pow(1 - p_a, j);
    const double expected = (1 - p_a) * p_h + (1 - p_a) * (1 - p_h) * sum;
    CHECK(boe_success(2, 0.5, p_a, p_h) == doctest::Approx(expected));
    // Spot value at (2, 0.5, 0.5, 0.5).
    const double base = 0.5 * 0.5 + 0.5;
    const double expo = std::log(5.0) / std::log(2.0);
    CHECK(boe_success(2, 0.5, 0.5, 0.5) ==
          doctest::Approx(0.5 * (0.5 + 0.5 * std::pow(base, expo))));
  }
}
