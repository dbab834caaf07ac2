#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "sdct/network.hpp"
#include "sdct/types.hpp"

namespace sdct {

/// Deterministically developing epidemic parameters. All durations are in
/// days; probabilities are per day (p_i) or per node (p_a, p_h).
struct EpidemicParams {
  double p_i = 0.1;
  double p_a = 0.5;
  double p_h = 0.2;
  Day T_E = 3;
  Day T_P = 2;
  Day T_I = 14;
  Day T_H = 5;
  bool no_recovery = false;
  bool drop_presymptomatic = false;

  void validate() const;

  /// Pre-symptomatic duration actually used (0 under drop_presymptomatic).
  Day effective_T_P() const { return drop_presymptomatic ? 0 : T_P; }

  /// Same parameters with the DDE_NR flags set.
  EpidemicParams no_recovery_variant() const {
    auto p = *this;
    p.no_recovery = true;
    p.drop_presymptomatic = true;
    return p;
  }
};

enum class Course : std::uint8_t { kAsymptomatic, kRecovering, kHospitalized };

const char* to_string(Course c);

enum class Compartment : std::uint8_t {
  kSusceptible,
  kExposed,
  kPresymptomatic,
  kAsymptomatic,
  kSymptomatic,
  kHospitalized,
  kRecovered,
};

struct NodeTimeline {
  Day exposure_day = kNever;
  Course course = Course::kAsymptomatic;
  NodeId infector = kNoNode;
  Day onset_day = kNever;             // symptomatic courses only
  Day hospitalization_day = kNever;   // hospitalized course only
  Day infectious_until = kNever;      // exclusive; kNever without recovery

  bool infected() const { return exposure_day != kNever; }
  bool symptomatic() const { return infected() && course != Course::kAsymptomatic; }

  friend bool operator==(const NodeTimeline&, const NodeTimeline&) = default;
};

struct EpidemicState {
  Day day = 0;  // next day to be simulated
  NodeId source = kNoNode;
  std::vector<NodeTimeline> timelines;  // indexed by node id, grows on demand
  std::vector<NodeId> infected;         // in order of exposure
  std::vector<NodeId> active;           // infected nodes that may still transmit

  const NodeTimeline& timeline(NodeId v) const;
  bool is_infected(NodeId v) const { return timeline(v).infected(); }
  Compartment compartment(NodeId v, Day at, const EpidemicParams& params) const;

  friend bool operator==(const EpidemicState& a, const EpidemicState& b) {
    return a.day == b.day && a.source == b.source && a.infected == b.infected &&
           a.timelines == b.timelines;
  }
};

/// Records the exposure of `v` on `day` with a fixed course. Used by the
/// simulator and for hand-built worlds.
void expose(EpidemicState& state, NodeId v, NodeId infector, Day day, Course course,
            const EpidemicParams& params);

Course draw_course(const EpidemicParams& params, Rng& rng);

/// State on day 0 with `source` exposed that day.
EpidemicState seed_epidemic(NodeId source, const EpidemicParams& params, Rng& rng);

/// Simulates day `state.day`: every node infectious that day tries each
/// susceptible neighbor with probability p_i. Same-day competing infectors
/// are resolved uniformly at random.
void step(EpidemicState& state, const ContactNetwork& g, const EpidemicParams& params,
          Rng& rng);

struct Outbreak {
  EpidemicState state;  // frozen at the start of day t_h
  NodeId h = kNoNode;
  Day t_h = 0;
};

struct RunLimits {
  Day max_days = 5000;
  std::size_t max_infected = 1'000'000;
};

/// Runs from a fresh source until the first hospitalization. Returns
/// nullopt when the epidemic dies out or a limit is reached first.
std::optional<Outbreak> run_until_first_hospitalization(const ContactNetwork& g,
                                                        NodeId source,
                                                        const EpidemicParams& params,
                                                        Rng& rng, RunLimits limits = {});

/// Infector chain (source, ..., h).
std::vector<NodeId> transmission_path(const EpidemicState& state, NodeId h);

/// `node,exposure_day,course,infector` for every infected node.
void write_timelines_csv(std::ostream& out, const EpidemicState& state);

}  // namespace sdct
