#pragma once

#include <deque>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "sdct/epidemic.hpp"
#include "sdct/network.hpp"

namespace sdct {

class NoOutbreakError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SessionOptions {
  bool freeze_epidemic = false;
  std::size_t population = 0;      // 0: node count of the network at open
  std::size_t daily_test_cap = 0;  // 0: ceil(1% of population)
  std::ostream* trace = nullptr;   // JSON-lines event log
};

/// Contact-time window of a contact query. Static networks ignore it.
struct ContactWindow {
  Day from = 0;
  Day to = 0;
};

struct TestResult {
  enum class Kind : std::uint8_t { kNegative, kPositiveNoOnset, kPositiveOnset };
  Kind kind = Kind::kNegative;
  Day onset = kNever;  // kPositiveOnset only

  static TestResult negative() { return {}; }
  static TestResult positive_no_onset() { return {Kind::kPositiveNoOnset, kNever}; }
  static TestResult positive_onset(Day d) { return {Kind::kPositiveOnset, d}; }

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

const char* to_string(TestResult::Kind k);

struct TestReport {
  NodeId node = kNoNode;
  Day dispatch_day = 0;
  TestResult result;
};

struct Ledger {
  std::size_t tests = 0;
  std::size_t edges_revealed = 0;
  std::size_t household_queries = 0;
  std::size_t contact_queries = 0;
  Day days_elapsed = 0;

  friend bool operator==(const Ledger&, const Ledger&) = default;
};

/// Query oracle between a detection algorithm and the epidemic world. The
/// clock starts on the day of the first hospitalization. Tests are
/// dispatched FIFO under a daily cap, evaluated against the state on the
/// dispatch day and answered on the following day.
class Session {
 public:
  Session(std::shared_ptr<const ContactNetwork> network, EpidemicParams params,
          Outbreak outbreak, std::uint64_t seed, SessionOptions options = {});

  /// Simulates from `source` until the first hospitalization and opens a
  /// session there. Throws NoOutbreakError when the epidemic dies out.
  static Session open(std::shared_ptr<const ContactNetwork> network,
                      const EpidemicParams& params, NodeId source, std::uint64_t seed,
                      SessionOptions options = {});

  Day today() const { return clock_; }
  NodeId first_hospitalized() const { return h_; }
  Day first_hospitalization_day() const { return t_h_; }
  /// Symptom onset of the first hospitalized node (known to the health
  /// authority when it is admitted).
  Day first_hospitalized_onset() const;

  const EpidemicParams& params() const { return params_; }
  std::size_t population() const { return population_; }
  std::size_t daily_test_cap() const { return cap_; }
  bool frozen() const { return options_.freeze_epidemic; }

  std::vector<NodeId> query_household(NodeId v);
  std::vector<NodeId> query_contacts(NodeId v, std::optional<ContactWindow> window = {});
  /// Hands the whole static graph to a non-adaptive method; every edge is
  /// charged to the ledger. Throws if the world is not a static Graph.
  const Graph& reveal_full_network();

  void submit_test(NodeId v);
  /// Tests that would still be dispatched today if submitted now.
  std::size_t tests_available_today() const;
  /// Moves the clock forward one day and returns the results that arrive.
  std::vector<TestReport> advance_day();
  /// No test queued or awaiting its answer.
  bool idle() const { return pending_.empty() && in_flight_.empty(); }

  const Ledger& ledger() const { return ledger_; }

  // Evaluation only; detection code must not look at these.
  const EpidemicState& ground_truth() const { return state_; }
  const ContactNetwork& ground_truth_network() const { return *network_; }

 private:
  void check(NodeId v) const;
  void dispatch(NodeId v);
  TestResult evaluate(NodeId v) const;
  void reveal_edge(NodeId a, NodeId b);
  void trace(const char* event, NodeId node, const std::string& payload_json) const;

  std::shared_ptr<const ContactNetwork> network_;
  EpidemicParams params_;
  EpidemicState state_;
  Rng rng_;
  SessionOptions options_;
  NodeId h_;
  Day t_h_;
  Day clock_;
  std::size_t population_;
  std::size_t cap_;
  std::size_t dispatched_today_ = 0;
  std::deque<NodeId> pending_;
  std::deque<TestReport> in_flight_;
  std::unordered_set<std::uint64_t> revealed_;
  Ledger ledger_;
};

}  // namespace sdct
