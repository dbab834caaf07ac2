#include <memory>

#include <benchmark/benchmark.h>

#include "sdct/analytic.hpp"
#include "sdct/detect.hpp"
#include "sdct/dmp.hpp"
#include "sdct/epidemic.hpp"
#include "sdct/network.hpp"
#include "sdct/size_gain.hpp"

using namespace sdct;

namespace {

// First outbreak from node 0 on seeds 1, 2, ... that reaches a hospitalization.
std::pair<std::shared_ptr<Graph>, Outbreak> sample_world(std::size_t n) {
  const EpidemicParams params;
  for (std::uint64_t seed = 1;; ++seed) {
    auto g = std::make_shared<Graph>(generate_hnm(NetworkParams{n, 2, 3}, seed));
    Rng rng(seed);
    if (auto o = run_until_first_hospitalization(*g, 0, params, rng)) return {g, *o};
  }
}

void BM_GenerateHnm(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto g = generate_hnm(NetworkParams{static_cast<std::size_t>(state.range(0)), 2, 3}, ++seed);
    benchmark::DoNotOptimize(g.node_count());
  }
}
BENCHMARK(BM_GenerateHnm)->Arg(399)->Arg(3999);

void BM_EpidemicToHospitalization(benchmark::State& state) {
  const auto g = generate_hnm(NetworkParams{399, 2, 3}, 5);
  const EpidemicParams params;
  Rng rng(9);
  for (auto _ : state) {
    auto o = run_until_first_hospitalization(g, 0, params, rng);
    benchmark::DoNotOptimize(o.has_value());
  }
}
BENCHMARK(BM_EpidemicToHospitalization);

void BM_LocalSearch(benchmark::State& state) {
  const auto [g, o] = sample_world(399);
  const EpidemicParams params;
  const LsConfig cfg{.plus = state.range(0) != 0};
  for (auto _ : state) {
    Session s(g, params, o, 3, {});
    benchmark::DoNotOptimize(run_ls(s, cfg).estimate);
  }
}
BENCHMARK(BM_LocalSearch)->Arg(0)->Arg(1);

void BM_DmpMarginals(benchmark::State& state) {
  const auto g = generate_hnm(NetworkParams{399, 2, 3}, 5);
  const auto model = plain_dmp_model(g, EpidemicParams{});
  for (auto _ : state) {
    auto m = dmp_marginals(model, 0, 0, static_cast<Day>(state.range(0)));
    benchmark::DoNotOptimize(m.susceptible(1, 1));
  }
}
BENCHMARK(BM_DmpMarginals)->Arg(20)->Arg(40);

void BM_SizeGainFilter(benchmark::State& state) {
  const auto [g, o] = sample_world(399);
  const DistanceTable dist(*g);
  const EpidemicParams params;
  const auto model = SgModel::from(params, SgConfig{});
  std::vector<NodeId> all(g->node_count());
  for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
  const std::vector<Observation> obs{
      {o.h, TestResult::Kind::kPositiveOnset, o.state.timeline(o.h).onset_day}};
  for (auto _ : state) benchmark::DoNotOptimize(sg_filter(all, obs, dist, model).size());
}
BENCHMARK(BM_SizeGainFilter);

void BM_RetApproximation(benchmark::State& state) {
  RETParams ret;
  ret.p_i = rescaled_p_i(0.1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ret_path_length_approx(ret).total());
}
BENCHMARK(BM_RetApproximation);

void BM_LsPlusBound(benchmark::State& state) {
  RETParams ret;
  ret.p_i = rescaled_p_i(0.1, 3);
  const auto dist = ret_path_length_approx(ret);
  const auto rb = RBTreeParams::from(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ls_plus_success_lb(dist, 0.5, rb));
}
BENCHMARK(BM_LsPlusBound);

}  // namespace

BENCHMARK_MAIN();
