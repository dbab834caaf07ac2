#include "sdct/detect.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace sdct {

void LsConfig::validate() const {
  if (sigma_E < 0 || sigma_P < 0) throw ParameterError("ls: window slacks must be nonnegative");
}

EstimateCheck check_estimate(const EpidemicState& truth, NodeId estimate) {
  EstimateCheck out;
  out.source = estimate == truth.source;
  Day earliest = kNever;
  for (NodeId v : truth.infected) {
    const auto& tl = truth.timelines[v];
    if (tl.symptomatic()) earliest = std::min(earliest, tl.onset_day);
  }
  const auto& est = truth.timeline(estimate);
  out.first_symptomatic = est.symptomatic() && est.onset_day == earliest;
  return out;
}

LsOutcome run_ls(Session& s, const LsConfig& cfg) {
  cfg.validate();
  const auto& P = s.params();
  const NodeId h = s.first_hospitalized();

  std::unordered_map<NodeId, TestResult> known;
  known[h] = TestResult::positive_onset(s.first_hospitalized_onset());
  std::unordered_set<NodeId> seen{h};
  std::deque<NodeId> queue;
  auto enqueue = [&](NodeId v) {
    if (seen.insert(v).second) queue.push_back(v);
  };
  auto is_asymptomatic = [&](NodeId v) {
    auto it = known.find(v);
    return it != known.end() && it->second.kind == TestResult::Kind::kPositiveNoOnset;
  };

  NodeId sc = h;
  NodeId best = h;
  Day best_onset = known[h].onset;
  LsOutcome out;
  out.candidate_history.push_back(h);

  const Day slack = cfg.sigma_E + cfg.sigma_P;
  for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
    const Day t = best_onset;
    const ContactWindow backward{t - (P.T_E + P.T_P) - slack, t - (P.T_E + P.T_P) + slack};
    const ContactWindow asym_backward{t - (P.T_P + 2 * P.T_E + P.T_I),
                                      t - (P.T_P + 2 * P.T_E)};

    const auto household = s.query_household(sc);
    const std::unordered_set<NodeId> in_household(household.begin(), household.end());
    for (NodeId m : household) enqueue(m);
    for (NodeId c : s.query_contacts(sc, backward)) enqueue(c);

    std::unordered_set<NodeId> traced;
    auto trace_asymptomatic = [&](NodeId m) {
      if (!traced.insert(m).second) return;
      for (NodeId c : s.query_contacts(m, asym_backward)) enqueue(c);
    };
    if (cfg.plus) {
      for (NodeId m : household) {
        if (is_asymptomatic(m)) trace_asymptomatic(m);
      }
    }

    while (!queue.empty()) {
      const auto batch = std::min(queue.size(), s.tests_available_today());
      for (std::size_t i = 0; i < batch; ++i) {
        s.submit_test(queue.front());
        queue.pop_front();
      }
      bool improved = false;
      std::vector<NodeId> asymptomatic;
      for (const auto& r : s.advance_day()) {
        known[r.node] = r.result;
        if (r.result.kind == TestResult::Kind::kPositiveOnset) {
          const Day onset = r.result.onset;
          if (onset < best_onset || (onset == best_onset && best != sc && r.node < best)) {
            best = r.node;
            best_onset = onset;
            improved = true;
          }
        } else if (r.result.kind == TestResult::Kind::kPositiveNoOnset) {
          asymptomatic.push_back(r.node);
        }
      }
      if (cfg.v2 && improved) {
        for (NodeId v : queue) seen.erase(v);
        queue.clear();
        break;
      }
      if (cfg.plus) {
        for (NodeId a : asymptomatic) {
          for (NodeId m : s.query_household(a)) enqueue(m);
          if (in_household.count(a)) trace_asymptomatic(a);
        }
      }
    }

    if (best == sc) break;
    sc = best;
    out.candidate_history.push_back(sc);
  }

  out.estimate = sc;
  out.estimate_onset = best_onset;
  out.ledger = s.ledger();
  out.finish_day = s.today();
  out.success = check_estimate(s.ground_truth(), sc);
  return out;
}

PathPredicates ls_success_predicate(std::span<const NodeId> path, const EpidemicState& truth,
                                    const ContactNetwork& g) {
  PathPredicates out;
  if (path.empty()) return out;
  out.ls = std::all_of(path.begin(), path.end(),
                       [&](NodeId v) { return truth.timeline(v).symptomatic(); });
  std::unordered_map<HouseholdId, bool> covered;
  for (NodeId v : path) {
    auto& c = covered[g.household_of(v)];
    c = c || truth.timeline(v).symptomatic();
  }
  out.ls_plus = truth.timeline(path.front()).symptomatic() &&
                std::all_of(covered.begin(), covered.end(),
                            [](const auto& kv) { return kv.second; });
  return out;
}

}  // namespace sdct
