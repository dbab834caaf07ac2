#include "sdct/size_gain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

namespace sdct {

DistanceTable::DistanceTable(const Graph& g) : n_(g.node_count()), dist_(n_ * n_, -1) {
  std::deque<NodeId> frontier;
  for (NodeId s = 0; s < n_; ++s) {
    std::int16_t* row = &dist_[s * n_];
    row[s] = 0;
    frontier.assign(1, s);
    while (!frontier.empty()) {
      const NodeId v = frontier.front();
      frontier.pop_front();
      for (NodeId u : g.neighbors(v)) {
        if (row[u] < 0) {
          row[u] = static_cast<std::int16_t>(row[v] + 1);
          frontier.push_back(u);
        }
      }
    }
  }
}

void SgConfig::validate() const {
  if (sigma && *sigma < 0) throw ParameterError("sg: sigma must be nonnegative");
  if (mu && *mu <= 0) throw ParameterError("sg: mu must be positive");
  if (sampled_hypotheses == 0) throw ParameterError("sg: sampled_hypotheses must be positive");
}

SgModel SgModel::from(const EpidemicParams& params, const SgConfig& cfg) {
  cfg.validate();
  SgModel m;
  m.T_E = params.T_E;
  m.T_P = params.effective_T_P();
  m.T_H = params.T_H;
  const double p = params.p_i;
  if (p <= 0.0 && (!cfg.mu || !cfg.sigma)) {
    throw ParameterError("sg: default delay model needs p_i > 0");
  }
  m.mu = cfg.mu.value_or(params.T_E + (1.0 - p) / p);
  m.sigma = cfg.sigma.value_or(std::max(0.5, std::sqrt(1.0 - p) / p));
  return m;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exposure-day bounds implied by an observation.
struct Bounds {
  bool has_lower = false;
  bool has_upper = false;
  double lower = 0.0;
  double upper = 0.0;
};

Bounds bounds_of(const Observation& o, const SgModel& m) {
  switch (o.kind) {
    case TestResult::Kind::kPositiveOnset: {
      const double e = o.day - m.T_E - m.T_P;
      return {true, true, e, e};
    }
    case TestResult::Kind::kPositiveNoOnset:
      return {false, true, 0.0, static_cast<double>(o.day - m.T_E)};
    case TestResult::Kind::kNegative:
      return {true, false, static_cast<double>(o.day - m.T_E + 1), 0.0};
  }
  return {};
}

// X cannot have been exposed much later than the delay model allows
// relative to Y.
bool pair_ok(double x_lower, int dx, double y_upper, int dy, const SgModel& m) {
  return (x_lower - y_upper) - m.mu * (dx - dy) < m.sigma * (dx + dy);
}

}  // namespace

bool sg_consistent(NodeId c, std::span<const Observation> obs, const DistanceTable& dist,
                   const SgModel& model) {
  for (const auto& o : obs) {
    if (o.kind != TestResult::Kind::kNegative && dist(c, o.node) < 0) return false;
  }
  for (const auto& x : obs) {
    const auto bx = bounds_of(x, model);
    const int dx = dist(c, x.node);
    if (!bx.has_lower || dx < 0) continue;
    for (const auto& y : obs) {
      if (y.node == x.node) continue;
      const auto by = bounds_of(y, model);
      if (!by.has_upper) continue;
      if (!pair_ok(bx.lower, dx, by.upper, dist(c, y.node), model)) return false;
    }
  }
  return true;
}

std::vector<NodeId> sg_filter(std::span<const NodeId> candidates,
                              std::span<const Observation> observations,
                              const DistanceTable& dist, const SgModel& model) {
  std::vector<NodeId> kept;
  for (NodeId c : candidates) {
    if (sg_consistent(c, observations, dist, model)) kept.push_back(c);
  }
  return kept;
}

std::vector<NodeId> sg_next_sensors(const SgState& state, const DistanceTable& dist,
                                    const SgModel& model, const SgConfig& cfg, Day today,
                                    std::size_t count, Rng& rng) {
  const auto& C = state.candidates;
  if (count == 0 || C.empty()) return {};

  // Anchor the start-time prior on the earliest symptomatic observation.
  const Observation* anchor = nullptr;
  for (const auto& o : state.observations) {
    if (o.symptomatic() && (!anchor || o.day < anchor->day)) anchor = &o;
  }
  if (!anchor) return {};
  const double anchor_exposure = bounds_of(*anchor, model).lower;

  struct Hypothesis {
    std::size_t candidate;  // index into C
    double start;
  };
  const int width = std::max(1, model.T_E + model.T_P + model.T_H);
  std::vector<Hypothesis> hyps;
  const auto total = C.size() * static_cast<std::size_t>(width);
  auto make = [&](std::size_t ci, int slot) {
    const double centre = anchor_exposure - model.mu * dist(C[ci], anchor->node);
    return Hypothesis{ci, centre + (slot - width / 2)};
  };
  if (total > cfg.max_hypotheses) {
    for (std::size_t i = 0; i < cfg.sampled_hypotheses; ++i) {
      hyps.push_back(make(uniform_index(rng, C.size()), static_cast<int>(uniform_index(rng, width))));
    }
  } else {
    for (std::size_t ci = 0; ci < C.size(); ++ci) {
      for (int slot = 0; slot < width; ++slot) hyps.push_back(make(ci, slot));
    }
  }

  std::vector<Bounds> obs_bounds;
  for (const auto& o : state.observations) obs_bounds.push_back(bounds_of(o, model));
  const double pno_upper = today - model.T_E;
  const double neg_lower = today - model.T_E + 1;

  std::vector<double> lo(C.size()), hi(C.size());
  std::vector<char> ok_pno(C.size()), ok_neg(C.size()), reach(C.size());
  std::vector<std::pair<double, NodeId>> scored;
  std::map<int, std::size_t> sym_counts;

  for (NodeId v = 0; v < dist.node_count(); ++v) {
    if (state.tested[v]) continue;
    for (std::size_t ci = 0; ci < C.size(); ++ci) {
      const NodeId c = C[ci];
      const int dv = dist(c, v);
      reach[ci] = dv >= 0;
      lo[ci] = -kInf;
      hi[ci] = kInf;
      ok_pno[ci] = 1;
      ok_neg[ci] = 1;
      if (dv < 0) continue;
      for (std::size_t j = 0; j < obs_bounds.size(); ++j) {
        const int dj = dist(c, state.observations[j].node);
        if (dj < 0) continue;
        const auto& b = obs_bounds[j];
        if (b.has_upper) {
          hi[ci] = std::min(hi[ci], b.upper + model.mu * (dv - dj) + model.sigma * (dv + dj));
          if (!pair_ok(neg_lower, dv, b.upper, dj, model)) ok_neg[ci] = 0;
        }
        if (b.has_lower) {
          lo[ci] = std::max(lo[ci], b.lower - model.mu * (dj - dv) - model.sigma * (dj + dv));
          if (!pair_ok(b.lower, dj, pno_upper, dv, model)) ok_pno[ci] = 0;
        }
      }
    }

    sym_counts.clear();
    std::size_t n_pno = 0, n_neg = 0;
    for (const auto& hy : hyps) {
      const int dv = dist(C[hy.candidate], v);
      if (dv < 0) {
        ++n_neg;
        continue;
      }
      const auto x = static_cast<int>(std::lround(hy.start + model.mu * dv));
      if (x + model.T_E + model.T_P <= today) {
        ++sym_counts[x];
      } else if (x + model.T_E <= today) {
        ++n_pno;
      } else {
        ++n_neg;
      }
    }
    double expected = 0.0;
    for (const auto& [x, k] : sym_counts) {
      std::size_t removed = 0;
      for (std::size_t ci = 0; ci < C.size(); ++ci) {
        if (!reach[ci] || !(lo[ci] < x && x < hi[ci])) ++removed;
      }
      expected += static_cast<double>(k * removed);
    }
    if (n_pno) {
      std::size_t removed = 0;
      for (std::size_t ci = 0; ci < C.size(); ++ci) removed += !reach[ci] || !ok_pno[ci];
      expected += static_cast<double>(n_pno * removed);
    }
    if (n_neg) {
      std::size_t removed = 0;
      for (std::size_t ci = 0; ci < C.size(); ++ci) removed += !ok_neg[ci];
      expected += static_cast<double>(n_neg * removed);
    }
    scored.emplace_back(expected / static_cast<double>(hyps.size()), v);
  }

  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < std::min(count, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

SgOutcome run_sg(Session& s, const SgConfig& cfg) {
  const auto model = SgModel::from(s.params(), cfg);
  const Graph& g = s.reveal_full_network();
  const DistanceTable dist(g);
  const NodeId h = s.first_hospitalized();
  Rng rng(cfg.seed);

  SgState state;
  state.observations.push_back(first_observation(s));
  state.tested.assign(g.node_count(), 0);
  state.tested[h] = 1;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (dist(h, v) >= 0) state.candidates.push_back(v);
  }
  state.candidates = sg_filter(state.candidates, state.observations, dist, model);

  while (state.candidates.size() > 1 && s.today() < cfg.deadline_day) {
    const auto sensors = sg_next_sensors(state, dist, model, cfg, s.today(),
                                         s.tests_available_today(), rng);
    if (sensors.empty()) break;
    for (NodeId v : sensors) {
      state.tested[v] = 1;
      s.submit_test(v);
    }
    for (const auto& r : s.advance_day()) state.observations.push_back(Observation::from(r));
    state.candidates = sg_filter(state.candidates, state.observations, dist, model);
  }

  SgOutcome out;
  if (state.candidates.empty()) {
    out.estimate = h;
  } else if (state.candidates.size() == 1) {
    out.estimate = state.candidates.front();
  } else {
    out.estimate = state.candidates[uniform_index(rng, state.candidates.size())];
  }
  out.final_candidates = std::move(state.candidates);
  out.observations = std::move(state.observations);
  out.ledger = s.ledger();
  out.finish_day = s.today();
  out.success = check_estimate(s.ground_truth(), out.estimate);
  return out;
}

}  // namespace sdct
