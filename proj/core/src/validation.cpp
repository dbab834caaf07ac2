#include <cmath>
#include <sstream>

#include "sdct/analytic.hpp"
#include "sdct/detect.hpp"
#include "sdct/dmp.hpp"
#include "sdct/harness.hpp"

namespace sdct {

namespace {

CheckResult path_count_identity() {
  for (std::size_t dc = 1; dc <= 5; ++dc) {
    for (std::size_t dh = 1; dh <= 5; ++dh) {
      const auto rb = RBTreeParams::from(dc, dh);
      for (unsigned n = 0; n <= 30; ++n) {
        const double exact = rb_path_count_recurrence(n, dc, dh).convert_to<double>();
        const double closed = rb_path_count(n, rb);
        if (std::abs(closed - exact) > 1e-9 * exact ||
            rb_path_count_closed_exact(n, dc, dh) != rb_path_count_recurrence(n, dc, dh)) {
          std::ostringstream d;
          d << "d_c=" << dc << " d_h=" << dh << " n=" << n << ": " << closed << " vs " << exact;
          return {"path count closed form", false, d.str()};
        }
      }
      for (unsigned n = 0; n <= 15; ++n) {
        BigInt sum = 0;
        for (unsigned k = 0; k <= n + 1; ++k)
          for (unsigned a = 0; a <= 1; ++a)
            for (unsigned b = 0; b <= 1; ++b) sum += rb_path_class_count(n, k, a, b, dc, dh);
        if (sum != rb_path_count_recurrence(n, dc, dh)) {
          std::ostringstream d;
          d << "class sum mismatch d_c=" << dc << " d_h=" << dh << " n=" << n;
          return {"path class completeness", false, d.str()};
        }
      }
    }
  }
  return {"path counts", true, "n <= 30, (d_c, d_h) in {1..5}^2"};
}

CheckResult ret_size_identity() {
  RETParams ret;
  ret.p_i = rescaled_p_i(0.1, 3);
  for (int t = 0; t <= 20; ++t) {
    double sum = 0;
    for (int l = 0; l <= t; ++l) sum += ret_expected_profile(t, l, ret);
    if (std::abs(sum - ret_expected_size(t, ret)) > 1e-9) {
      return {"RET expected size", false, "t=" + std::to_string(t)};
    }
  }
  const auto approx = ret_path_length_approx(ret);
  const double mass = approx.total();
  for (double x : approx.pmf) {
    if (x < 0) return {"RET path length approximation", false, "negative mass"};
  }
  if (mass < 1 - 1e-6 || mass > 1 + 1e-6)
    return {"RET path length approximation", false, "mass " + std::to_string(mass)};
  return {"RET profile identities", true, "t <= 20"};
}

CheckResult dmp_on_tree() {
  // Path 0-1-2-3 with a star hanging off 1.
  std::vector<std::vector<NodeId>> adj{{1}, {0, 2, 4, 5}, {1, 3}, {2}, {1}, {1}};
  std::vector<HouseholdId> hh{0, 1, 2, 3, 4, 5};
  const Graph g(adj, hh);
  EpidemicParams params;
  params.p_i = 0.3;
  params.T_E = 2;
  params.T_I = 4;
  const auto model = plain_dmp_model(g, params);
  const auto dmp = dmp_marginals(model, 0, 0, 15, DmpOptions{0.0});
  const auto exact = tree_exact_marginals(model, 0, 0, 15);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (Day t = 0; t <= 15; ++t) {
      if (std::abs(dmp.susceptible(v, t) - exact.susceptible(v, t)) > 1e-9)
        return {"DMP on trees", false, "node " + std::to_string(v) + " day " + std::to_string(t)};
    }
  }
  return {"DMP on trees", true, "6-node tree, 15 days"};
}

CheckResult wilson_sanity() {
  for (std::size_t n : {1, 7, 100}) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto iv = wilson_interval(k, n);
      const double p = static_cast<double>(k) / static_cast<double>(n);
      if (!iv.contains(p) || iv.hi - iv.lo <= 0) return {"Wilson interval", false, "k/n outside"};
    }
  }
  return {"Wilson interval", true, "contains k/n, positive width"};
}

CheckResult path_predicate_equivalence(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.model = Model::kRbTreeDdeNr;
  cfg.algorithms = {Algorithm::kLs, Algorithm::kLsPlus};
  cfg.replicates = 300;
  cfg.base_seed = seed;
  const auto res = run_experiment(cfg);
  std::size_t ls_mismatch = 0, plus_violation = 0;
  for (const auto& r : res.records) {
    if (r.algorithm == Algorithm::kLs && r.success_source != r.predicate_ls) ++ls_mismatch;
    if (r.algorithm == Algorithm::kLsPlus && r.predicate_ls_plus && !r.success_source)
      ++plus_violation;
  }
  std::ostringstream d;
  d << ls_mismatch << " LS mismatches, " << plus_violation << " LS+ violations in "
    << cfg.replicates << " worlds";
  return {"LS path predicates", ls_mismatch == 0 && plus_violation == 0, d.str()};
}

CheckResult determinism(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.algorithms = {Algorithm::kLs, Algorithm::kLsPlus, Algorithm::kRandomDmp, Algorithm::kSg};
  cfg.n = {99};
  cfg.replicates = 4;
  cfg.base_seed = seed;
  auto once = [&](std::size_t threads) {
    auto c = cfg;
    c.threads = threads;
    const auto res = run_experiment(c);
    std::ostringstream out;
    write_records_csv(out, res, c);
    write_summary_csv(out, res, c);
    return out.str();
  };
  const bool same = once(1) == once(2);
  return {"replay determinism", same, same ? "identical CSV with 1 and 2 threads" : "CSV differs"};
}

}  // namespace

std::vector<CheckResult> run_validation(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto guarded = [&](auto&& check) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({"exception", false, e.what()});
    }
  };
  guarded(path_count_identity);
  guarded(ret_size_identity);
  guarded(dmp_on_tree);
  guarded(wilson_sanity);
  guarded([&] { return path_predicate_equivalence(seed); });
  guarded([&] { return determinism(seed); });
  return out;
}

}  // namespace sdct
