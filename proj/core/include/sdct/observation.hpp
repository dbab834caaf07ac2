#pragma once

#include <vector>

#include "sdct/epidemic.hpp"
#include "sdct/session.hpp"

namespace sdct {

/// One test answer as seen by an inference method. `day` is the onset day
/// for kPositiveOnset and the test (dispatch) day otherwise.
struct Observation {
  NodeId node = kNoNode;
  TestResult::Kind kind = TestResult::Kind::kNegative;
  Day day = 0;

  bool symptomatic() const { return kind == TestResult::Kind::kPositiveOnset; }

  static Observation from(const TestReport& r) {
    return {r.node, r.result.kind,
            r.result.kind == TestResult::Kind::kPositiveOnset ? r.result.onset : r.dispatch_day};
  }
};

/// Range of exposure days consistent with an observation (inclusive).
/// Negative observations leave the upper end open: the node may never
/// have been exposed.
struct ExposureBound {
  Day lo = std::numeric_limits<Day>::min();
  Day hi = kNever;

  bool admits(Day e) const { return e >= lo && e <= hi; }
};

inline ExposureBound exposure_bound(const Observation& o, const EpidemicParams& p) {
  switch (o.kind) {
    case TestResult::Kind::kPositiveOnset: {
      const Day e = o.day - p.T_E - p.effective_T_P();
      return {e, e};
    }
    case TestResult::Kind::kPositiveNoOnset:
      return {std::numeric_limits<Day>::min(), o.day - p.T_E};
    case TestResult::Kind::kNegative:
      return {o.day - p.T_E + 1, kNever};
  }
  return {};
}

/// Observations a session starts with: the first hospitalized node and its onset.
inline Observation first_observation(const Session& s) {
  return {s.first_hospitalized(), TestResult::Kind::kPositiveOnset, s.first_hospitalized_onset()};
}

}  // namespace sdct
