#pragma once

// The two hand-built detection scenarios with asymptomatic path nodes.

#include <memory>

#include "sdct/detect.hpp"
#include "unit/worlds.hpp"

namespace sdct::testing {

struct Scenario {
  EpidemicParams params;
  std::shared_ptr<Graph> graph;
  Outbreak outbreak;

  LsOutcome run(LsConfig cfg) const {
    SessionOptions o;
    o.freeze_epidemic = true;
    o.population = 400;
    Session s(graph, params, outbreak, 1, o);
    return run_ls(s, cfg);
  }
};

// Transmission path v1 -> v2 -> v3 -> v5 with v2, v3 asymptomatic.
// Households {v2, v4} and {v3, v5}; v4 is a symptomatic housemate of v2
// whose onset precedes v5's. Ids: v1=0, v2=1, v3=2, v4=3, v5=4.
inline Scenario housemate_scenario() {
  Scenario s;
  s.graph = std::make_shared<Graph>(
      make_graph(5, {{0, 1}, {1, 2}, {1, 3}, {2, 4}}, {0, 1, 2, 1, 2}));
  s.outbreak = make_outbreak(5,
                             {{0, kNoNode, 0, Course::kRecovering},
                              {1, 0, 3, Course::kAsymptomatic},
                              {2, 1, 6, Course::kAsymptomatic},
                              {3, 1, 7, Course::kRecovering},
                              {4, 2, 9, Course::kHospitalized}},
                             4, s.params);
  return s;
}

// Same path, but v4 is a contact of v3 (own household) and v1 is a
// housemate of v2. v2 and v4 are tested in the same batch.
inline Scenario queue_scenario() {
  Scenario s;
  s.graph = std::make_shared<Graph>(
      make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {2, 4}}, {0, 0, 1, 2, 1}));
  s.outbreak = make_outbreak(5,
                             {{0, kNoNode, 0, Course::kRecovering},
                              {1, 0, 3, Course::kAsymptomatic},
                              {2, 1, 6, Course::kAsymptomatic},
                              {3, 2, 9, Course::kRecovering},
                              {4, 2, 10, Course::kHospitalized}},
                             4, s.params);
  return s;
}

}  // namespace sdct::testing
