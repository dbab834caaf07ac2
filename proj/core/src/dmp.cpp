#include "sdct/dmp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace sdct {

StarGraph star_transform(const Graph& g) {
  const std::size_t n = g.node_count();
  const std::size_t households = g.household_count();
  std::vector<std::vector<NodeId>> adjacency(n + households);
  std::vector<HouseholdId> household_of(n + households);
  for (NodeId v = 0; v < n; ++v) {
    household_of[v] = g.household_of(v);
    for (NodeId u : g.neighbors(v)) {
      if (g.household_of(u) != g.household_of(v)) adjacency[v].push_back(u);
    }
  }
  for (HouseholdId h = 0; h < households; ++h) {
    const auto center = static_cast<NodeId>(n + h);
    household_of[center] = h;
    for (NodeId m : g.household_members(h)) {
      adjacency[center].push_back(m);
      adjacency[m].push_back(center);
    }
  }
  return {Graph(std::move(adjacency), std::move(household_of)), n};
}

namespace {

DmpModel uniform_model(const Graph& g, const EpidemicParams& params) {
  const auto n = g.node_count();
  DmpModel m;
  m.graph = &g;
  m.T_E.assign(n, params.T_E);
  m.T_I.assign(n, params.T_I);
  m.p_a.assign(n, params.p_a);
  m.lambda_a.resize(n);
  m.lambda_s.resize(n);
  for (NodeId k = 0; k < n; ++k) {
    m.lambda_a[k].assign(g.degree(k), params.p_i);
    m.lambda_s[k].assign(g.degree(k), params.p_i);
  }
  return m;
}

void check_model(const DmpModel& m) {
  if (!m.graph) throw ParameterError("dmp: model without graph");
  const auto n = m.graph->node_count();
  if (m.T_E.size() != n || m.T_I.size() != n || m.p_a.size() != n ||
      m.lambda_a.size() != n || m.lambda_s.size() != n) {
    throw ParameterError("dmp: model arrays do not match the graph");
  }
  for (NodeId k = 0; k < n; ++k) {
    if (m.T_E[k] < 1) throw ParameterError("dmp: T_E must be at least 1");
  }
}

}  // namespace

DmpModel plain_dmp_model(const Graph& g, const EpidemicParams& params) {
  return uniform_model(g, params);
}

DmpModel star_dmp_model(const StarGraph& star, const EpidemicParams& params) {
  auto m = uniform_model(star.graph, params);
  for (NodeId k = 0; k < star.graph.node_count(); ++k) {
    const auto nbrs = star.graph.neighbors(k);
    if (star.is_center(k)) {
      m.T_E[k] = 1;
      m.p_a[k] = 0.0;
      continue;
    }
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      if (star.is_center(nbrs[j])) {
        m.lambda_a[k][j] = 1.0;
        m.lambda_s[k][j] = 1.0;
      }
    }
  }
  return m;
}

DmpMarginals::DmpMarginals(Day t0, Day t_end, std::size_t nodes)
    : t0_(t0), t_end_(std::max(t0, t_end)), nodes_(nodes),
      values_(static_cast<std::size_t>(t_end_ - t0_ + 1) * nodes, 1.0) {}

double DmpMarginals::susceptible(NodeId i, Day t) const {
  if (i >= nodes_) throw LookupError("dmp: unknown node " + std::to_string(i));
  if (t < t0_) return 1.0;
  return values_[index(i, std::min(t, t_end_))];
}

DmpMarginals dmp_marginals(const DmpModel& model, NodeId source, Day t0, Day t_end,
                           DmpOptions options) {
  check_model(model);
  const Graph& g = *model.graph;
  const auto n = g.node_count();
  if (source >= n) throw LookupError("dmp: unknown source");
  DmpMarginals out(t0, t_end, n);
  const auto steps = static_cast<std::size_t>(out.t_end() - t0);

  // Directed edge e = offset[k] + j stands for k -> adj[k][j].
  std::vector<std::size_t> offset(n + 1, 0);
  for (NodeId k = 0; k < n; ++k) offset[k + 1] = offset[k] + g.degree(k);
  const std::size_t edges = offset[n];
  std::vector<std::size_t> reverse(edges);
  std::vector<NodeId> sender(edges);
  for (NodeId k = 0; k < n; ++k) {
    const auto nbrs = g.neighbors(k);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const NodeId i = nbrs[j];
      const auto back = g.neighbors(i);
      const auto pos = std::lower_bound(back.begin(), back.end(), k) - back.begin();
      reverse[offset[k] + j] = offset[i] + static_cast<std::size_t>(pos);
      sender[offset[k] + j] = k;
    }
  }

  std::vector<double> init(n, 1.0);
  init[source] = 0.0;
  // Cavity susceptibility P_S^{k->i}(t0 + tau), one row per day.
  std::vector<double> cavity((steps + 1) * edges);
  for (std::size_t e = 0; e < edges; ++e) cavity[e] = init[sender[e]];
  for (NodeId i = 0; i < n; ++i) out.at(i, t0) = init[i];

  std::vector<double> theta(edges, 1.0), phi_a(edges, 0.0), phi_s(edges, 0.0);
  std::vector<double> decay_a(edges), decay_s(edges);
  std::vector<char> active(edges, 0);
  for (NodeId k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < g.degree(k); ++j) {
      decay_a[offset[k] + j] = std::pow(1.0 - model.lambda_a[k][j], model.T_I[k]);
      decay_s[offset[k] + j] = std::pow(1.0 - model.lambda_s[k][j], model.T_I[k]);
    }
  }
  auto cavity_at = [&](std::size_t e, Day t) {
    return t < t0 ? 1.0 : cavity[static_cast<std::size_t>(t - t0) * edges + e];
  };
  auto exposed_on = [&](std::size_t e, Day x) { return cavity_at(e, x - 1) - cavity_at(e, x); };

  for (std::size_t tau = 1; tau <= steps; ++tau) {
    const Day t = t0 + static_cast<Day>(tau);
    for (NodeId k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < g.degree(k); ++j) {
        const std::size_t e = offset[k] + j;
        const Day x = t - model.T_E[k];
        if (!active[e]) {
          if (1.0 - cavity_at(e, x) <= options.epsilon) continue;
          active[e] = 1;
        }
        const double fresh = exposed_on(e, x);
        const double old = exposed_on(e, x - model.T_I[k]);
        const double la = model.lambda_a[k][j], ls = model.lambda_s[k][j];
        const double pa = model.p_a[k];
        phi_a[e] = (1.0 - la) * phi_a[e] + pa * fresh - decay_a[e] * pa * old;
        phi_s[e] = (1.0 - ls) * phi_s[e] + (1.0 - pa) * fresh - decay_s[e] * (1.0 - pa) * old;
        theta[e] = std::clamp(theta[e] - la * phi_a[e] - ls * phi_s[e], 0.0, 1.0);
      }
    }
    double* row = &cavity[tau * edges];
    for (NodeId k = 0; k < n; ++k) {
      const auto nbrs = g.neighbors(k);
      double all = init[k];
      for (std::size_t j = 0; j < nbrs.size(); ++j) all *= theta[reverse[offset[k] + j]];
      out.at(k, t) = all;
      for (std::size_t j = 0; j < nbrs.size(); ++j) {
        double excl = init[k];
        for (std::size_t l = 0; l < nbrs.size(); ++l) {
          if (l != j) excl *= theta[reverse[offset[k] + l]];
        }
        row[offset[k] + j] = excl;
      }
    }
  }
  return out;
}

DmpMarginals tree_exact_marginals(const DmpModel& model, NodeId source, Day t0, Day t_end) {
  check_model(model);
  const Graph& g = *model.graph;
  const auto n = g.node_count();
  DmpMarginals out(t0, t_end, n);
  const auto T = static_cast<std::size_t>(out.t_end() - t0);

  std::vector<NodeId> parent(n, kNoNode);
  std::vector<char> seen(n, 0);
  std::vector<std::vector<double>> dist(n);  // exposure day offset pmf, truncated at T
  std::deque<NodeId> frontier{source};
  seen[source] = 1;
  dist[source].assign(T + 1, 0.0);
  dist[source][0] = 1.0;
  std::size_t component_edges = 0, component_nodes = 0;
  while (!frontier.empty()) {
    const NodeId k = frontier.front();
    frontier.pop_front();
    ++component_nodes;
    const auto nbrs = g.neighbors(k);
    component_edges += nbrs.size();
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const NodeId i = nbrs[j];
      if (seen[i]) continue;
      seen[i] = 1;
      parent[i] = k;
      std::vector<double> delay(T + 1, 0.0);
      const double la = model.lambda_a[k][j], ls = model.lambda_s[k][j], pa = model.p_a[k];
      for (Day gap = 0; gap < model.T_I[k]; ++gap) {
        const auto d = static_cast<std::size_t>(model.T_E[k] + gap);
        if (d > T) break;
        delay[d] = pa * la * std::pow(1.0 - la, gap) + (1.0 - pa) * ls * std::pow(1.0 - ls, gap);
      }
      auto& di = dist[i];
      di.assign(T + 1, 0.0);
      for (std::size_t a = 0; a <= T; ++a) {
        if (dist[k][a] == 0.0) continue;
        for (std::size_t b = 0; a + b <= T; ++b) di[a + b] += dist[k][a] * delay[b];
      }
      frontier.push_back(i);
    }
  }
  if (component_edges / 2 != component_nodes - 1) {
    throw ParameterError("dmp: exact marginals need a tree around the source");
  }
  for (NodeId i = 0; i < n; ++i) {
    if (!seen[i]) continue;
    double cdf = 0.0;
    for (std::size_t a = 0; a <= T; ++a) {
      cdf += dist[i][a];
      out.at(i, t0 + static_cast<Day>(a)) = std::max(0.0, 1.0 - cdf);
    }
  }
  return out;
}

std::vector<CandidatePair> feasible_sources(std::span<const Observation> observations,
                                            const Graph& g, const EpidemicParams& params,
                                            const FeasibleOptions& options) {
  std::vector<Observation> symptomatic;
  for (const auto& o : observations) {
    if (o.symptomatic()) symptomatic.push_back(o);
  }
  if (symptomatic.empty() || options.k2 == 0) return {};
  std::sort(symptomatic.begin(), symptomatic.end(), [](const auto& a, const auto& b) {
    return a.day != b.day ? a.day < b.day : a.node < b.node;
  });
  const std::size_t k1 = std::min({options.k1, symptomatic.size(), std::size_t{64}});
  symptomatic.resize(std::max<std::size_t>(k1, 1));

  const auto n = g.node_count();
  std::unordered_map<NodeId, ExposureBound> bounds;
  for (const auto& o : observations) {
    if (o.node >= n) throw LookupError("feasible_sources: unknown node");
    const auto b = exposure_bound(o, params);
    auto [it, fresh] = bounds.emplace(o.node, b);
    if (!fresh) {
      it->second.lo = std::max(it->second.lo, b.lo);
      it->second.hi = std::min(it->second.hi, b.hi);
    }
  }
  auto admits = [&](NodeId v, Day t) {
    auto it = bounds.find(v);
    return it == bounds.end() || it->second.admits(t);
  };

  Day t_hi = std::numeric_limits<Day>::min(), t_seed_lo = kNever;
  for (const auto& o : symptomatic) {
    const Day e = exposure_bound(o, params).lo;
    t_hi = std::max(t_hi, e);
    t_seed_lo = std::min(t_seed_lo, e);
  }
  const Day t_lo = std::min(options.t_min.value_or(t_seed_lo - 100), t_seed_lo);
  const auto width = static_cast<std::size_t>(t_hi - t_lo + 1);
  std::vector<std::uint64_t> mask(width * n, 0);
  auto cell = [&](Day t, NodeId v) -> std::uint64_t& {
    return mask[static_cast<std::size_t>(t - t_lo) * n + v];
  };
  const std::uint64_t full = k1 == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k1) - 1;
  for (std::size_t j = 0; j < k1; ++j) {
    const auto& o = symptomatic[j];
    const Day e = exposure_bound(o, params).lo;
    if (admits(o.node, e)) cell(e, o.node) |= std::uint64_t{1} << j;
  }

  std::vector<CandidatePair> done;
  for (Day t = t_hi; t >= t_lo; --t) {
    for (NodeId w = 0; w < n; ++w) {
      const std::uint64_t m = cell(t, w);
      if (!m) continue;
      if (m == full) done.push_back({w, t, 0.0});
      const Day from = std::max(t_lo, t - params.T_E - params.T_I + 1);
      const Day to = t - params.T_E;
      for (NodeId u : g.neighbors(w)) {
        for (Day tp = from; tp <= to; ++tp) {
          if (admits(u, tp)) cell(tp, u) |= m;
        }
      }
    }
    if (done.size() >= options.k2) break;
  }
  std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) {
    return a.start != b.start ? a.start > b.start : a.node < b.node;
  });
  if (done.size() > options.k2) done.resize(options.k2);
  return done;
}

double observation_log_score(const DmpMarginals& m, std::span<const Observation> observations,
                             const EpidemicParams& params) {
  double total = 0.0;
  for (const auto& o : observations) {
    double p = 0.0;
    switch (o.kind) {
      case TestResult::Kind::kPositiveOnset: {
        const Day e = o.day - params.T_E - params.effective_T_P();
        p = m.susceptible(o.node, e - 1) - m.susceptible(o.node, e);
        break;
      }
      case TestResult::Kind::kPositiveNoOnset:
        p = 1.0 - m.susceptible(o.node, o.day - params.T_E);
        break;
      case TestResult::Kind::kNegative:
        p = m.susceptible(o.node, o.day - params.T_E);
        break;
    }
    if (!(p > 1e-300)) return -std::numeric_limits<double>::infinity();
    total += std::log(p);
  }
  return total;
}

std::vector<CandidatePair> score_candidates(std::vector<CandidatePair> candidates,
                                            const StarGraph& star,
                                            std::span<const Observation> observations,
                                            const EpidemicParams& params, DmpOptions options) {
  if (candidates.empty()) return candidates;
  const auto model = star_dmp_model(star, params);
  Day t_end = std::numeric_limits<Day>::min();
  for (const auto& o : observations) {
    const auto b = exposure_bound(o, params);
    t_end = std::max(t_end, o.symptomatic() ? b.lo : o.day - params.T_E);
  }
  for (auto& c : candidates) {
    const auto marginals = dmp_marginals(model, c.node, c.start, std::max(t_end, c.start), options);
    c.score = observation_log_score(marginals, observations, params);
  }
  return candidates;
}

DmpOutcome run_random_dmp(Session& s, const RandomDmpConfig& cfg) {
  const auto& params = s.params();
  const NodeId h = s.first_hospitalized();
  const auto n = s.ground_truth_network().node_count();
  Rng rng(cfg.seed);

  std::vector<NodeId> pool;
  pool.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (v != h) pool.push_back(v);
  }
  const auto count = std::min(cfg.sensors, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
  }

  DmpOutcome out;
  out.observations.push_back(first_observation(s));
  for (std::size_t i = 0; i < count; ++i) s.submit_test(pool[i]);
  while (!s.idle()) {
    for (const auto& r : s.advance_day()) out.observations.push_back(Observation::from(r));
  }

  const Graph& g = s.reveal_full_network();
  auto candidates = feasible_sources(out.observations, g, params, cfg.feasible);
  out.estimate = h;
  if (!candidates.empty()) {
    const auto star = star_transform(g);
    out.candidates = score_candidates(std::move(candidates), star, out.observations, params, cfg.dmp);
    const auto best = std::max_element(
        out.candidates.begin(), out.candidates.end(),
        [](const auto& a, const auto& b) { return a.score < b.score; });
    out.estimate = best->node;
  }
  out.ledger = s.ledger();
  out.finish_day = s.today();
  out.success = check_estimate(s.ground_truth(), out.estimate);
  return out;
}

}  // namespace sdct
