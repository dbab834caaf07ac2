#include "sdct/epidemic.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace sdct {

void EpidemicParams::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ParameterError(std::string("epidemic: ") + name + " must lie in [0,1]");
    }
  };
  prob(p_i, "p_i");
  prob(p_a, "p_a");
  prob(p_h, "p_h");
  if (T_E < 1) throw ParameterError("epidemic: T_E must be at least 1 day");
  if (T_P < 0 || T_I < 0 || T_H < 0) throw ParameterError("epidemic: negative duration");
  if (!(T_P < T_E + T_H)) throw ParameterError("epidemic: requires T_P < T_E + T_H");
  if (!(T_P <= T_I)) throw ParameterError("epidemic: requires T_P <= T_I");
}

const char* to_string(Course c) {
  switch (c) {
    case Course::kAsymptomatic: return "asymptomatic";
    case Course::kRecovering: return "recovering";
    case Course::kHospitalized: return "hospitalized";
  }
  return "?";
}

const NodeTimeline& EpidemicState::timeline(NodeId v) const {
  static const NodeTimeline kSusceptible{};
  return v < timelines.size() ? timelines[v] : kSusceptible;
}

Compartment EpidemicState::compartment(NodeId v, Day at,
                                       const EpidemicParams& params) const {
  const auto& tl = timeline(v);
  if (!tl.infected() || at < tl.exposure_day) return Compartment::kSusceptible;
  if (at < tl.exposure_day + params.T_E) return Compartment::kExposed;
  if (tl.course == Course::kHospitalized && at >= tl.hospitalization_day) {
    return Compartment::kHospitalized;
  }
  if (at >= tl.infectious_until) return Compartment::kRecovered;
  if (tl.course == Course::kAsymptomatic) return Compartment::kAsymptomatic;
  return at < tl.onset_day ? Compartment::kPresymptomatic : Compartment::kSymptomatic;
}

Course draw_course(const EpidemicParams& params, Rng& rng) {
  if (bernoulli(rng, params.p_a)) return Course::kAsymptomatic;
  return bernoulli(rng, params.p_h) ? Course::kHospitalized : Course::kRecovering;
}

void expose(EpidemicState& state, NodeId v, NodeId infector, Day day, Course course,
            const EpidemicParams& params) {
  if (v >= state.timelines.size()) state.timelines.resize(v + 1);
  auto& tl = state.timelines[v];
  if (tl.infected()) throw ParameterError("epidemic: node " + std::to_string(v) + " already exposed");
  tl.exposure_day = day;
  tl.course = course;
  tl.infector = infector;
  if (course != Course::kAsymptomatic) tl.onset_day = day + params.T_E + params.effective_T_P();
  if (course == Course::kHospitalized) {
    tl.hospitalization_day = day + params.T_E + params.T_H;
    tl.infectious_until = tl.hospitalization_day;
  } else {
    tl.infectious_until = params.no_recovery ? kNever : day + params.T_E + params.T_I;
  }
  if (infector == kNoNode) state.source = v;
  state.infected.push_back(v);
  state.active.push_back(v);
}

EpidemicState seed_epidemic(NodeId source, const EpidemicParams& params, Rng& rng) {
  params.validate();
  EpidemicState state;
  expose(state, source, kNoNode, 0, draw_course(params, rng), params);
  return state;
}

void step(EpidemicState& state, const ContactNetwork& g, const EpidemicParams& params,
          Rng& rng) {
  const Day d = state.day;
  std::vector<std::pair<NodeId, NodeId>> hits;  // (target, infector)
  if (params.p_i > 0.0) {
    for (NodeId u : state.active) {
      const auto& tl = state.timelines[u];
      if (d < tl.exposure_day + params.T_E || d >= tl.infectious_until) continue;
      for (NodeId v : g.neighbors(u)) {
        if (state.is_infected(v)) continue;
        if (bernoulli(rng, params.p_i)) hits.emplace_back(v, u);
      }
    }
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j].first == hits[i].first) ++j;
    const NodeId infector = hits[i + (j - i > 1 ? uniform_index(rng, j - i) : 0)].second;
    expose(state, hits[i].first, infector, d, draw_course(params, rng), params);
    i = j;
  }
  std::erase_if(state.active,
                [&](NodeId v) { return state.timelines[v].infectious_until <= d + 1; });
  state.day = d + 1;
}

std::optional<Outbreak> run_until_first_hospitalization(const ContactNetwork& g,
                                                        NodeId source,
                                                        const EpidemicParams& params,
                                                        Rng& rng, RunLimits limits) {
  if (!g.contains(source)) throw LookupError("epidemic: unknown source " + std::to_string(source));
  auto state = seed_epidemic(source, params, rng);
  Day first = kNever;
  std::size_t scanned = 0;
  for (;;) {
    for (; scanned < state.infected.size(); ++scanned) {
      first = std::min(first, state.timelines[state.infected[scanned]].hospitalization_day);
    }
    if (first <= state.day) break;
    if (state.active.empty()) return std::nullopt;
    if (state.day >= limits.max_days || state.infected.size() >= limits.max_infected) {
      return std::nullopt;
    }
    step(state, g, params, rng);
  }
  std::vector<NodeId> tied;
  for (NodeId v : state.infected) {
    if (state.timelines[v].hospitalization_day == first) tied.push_back(v);
  }
  const NodeId h = tied.size() == 1 ? tied[0] : tied[uniform_index(rng, tied.size())];
  return Outbreak{std::move(state), h, first};
}

std::vector<NodeId> transmission_path(const EpidemicState& state, NodeId h) {
  if (!state.is_infected(h)) {
    throw LookupError("epidemic: node " + std::to_string(h) + " was never infected");
  }
  std::vector<NodeId> path;
  for (NodeId v = h; v != kNoNode; v = state.timelines[v].infector) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

void write_timelines_csv(std::ostream& out, const EpidemicState& state) {
  out << "node,exposure_day,course,infector\n";
  for (NodeId v : state.infected) {
    const auto& tl = state.timelines[v];
    out << v << ',' << tl.exposure_day << ',' << to_string(tl.course) << ',';
    if (tl.infector != kNoNode) out << tl.infector;
    out << '\n';
  }
}

}  // namespace sdct
