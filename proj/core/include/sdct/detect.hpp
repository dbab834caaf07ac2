#pragma once

#include <span>
#include <vector>

#include "sdct/session.hpp"

namespace sdct {

struct LsConfig {
  bool plus = false;   // LS+: also trace around asymptomatic nodes
  bool v2 = false;     // move to a better candidate as soon as one appears
  Day sigma_E = 0;     // window slack, only used on time-varying networks
  Day sigma_P = 0;
  std::size_t max_iterations = 100000;

  void validate() const;
};

/// Whether an estimate is the true source, and whether it is a node with
/// the earliest symptom onset among all symptomatic infections.
struct EstimateCheck {
  bool source = false;
  bool first_symptomatic = false;
};

EstimateCheck check_estimate(const EpidemicState& truth, NodeId estimate);

struct LsOutcome {
  NodeId estimate = kNoNode;
  Day estimate_onset = kNever;
  std::vector<NodeId> candidate_history;  // starts with the first hospitalized node
  Ledger ledger;
  Day finish_day = 0;
  EstimateCheck success;
};

/// Greedy backward tracing towards the earliest reported symptom onset.
LsOutcome run_ls(Session& session, const LsConfig& cfg);

struct PathPredicates {
  bool ls = false;       // every node on the path is symptomatic
  bool ls_plus = false;  // symptomatic source and a symptomatic path node in
                         // every household the path touches
};

PathPredicates ls_success_predicate(std::span<const NodeId> path, const EpidemicState& truth,
                                    const ContactNetwork& g);

}  // namespace sdct
