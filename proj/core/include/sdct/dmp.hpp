#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sdct/detect.hpp"
#include "sdct/observation.hpp"

namespace sdct {

/// Household cliques replaced by stars. Node ids below `original_nodes`
/// are the input nodes; household h gets the center `original_nodes + h`.
struct StarGraph {
  Graph graph;
  std::size_t original_nodes = 0;

  bool is_center(NodeId v) const { return v >= original_nodes; }
};

StarGraph star_transform(const Graph& g);

/// Per-node durations and per-directed-edge transmission probabilities for
/// the message-passing recursion. Edge weights are parallel to
/// `graph->adjacency()`: lambda_x[k][j] is the probability for k -> adj[k][j].
struct DmpModel {
  const Graph* graph = nullptr;
  std::vector<Day> T_E;
  std::vector<Day> T_I;
  std::vector<double> p_a;
  std::vector<std::vector<double>> lambda_a;
  std::vector<std::vector<double>> lambda_s;
};

/// Every node shares `params`; lambda_a = lambda_s = p_i.
DmpModel plain_dmp_model(const Graph& g, const EpidemicParams& params);

/// Star centers relay instantly (T_E = 1, probability 1 from a member to
/// the center) and reach every other member with probability p_i per day.
DmpModel star_dmp_model(const StarGraph& star, const EpidemicParams& params);

struct DmpOptions {
  /// Directed edges whose sender has exposure mass at most epsilon are not
  /// updated. 0 gives the exact recursion.
  double epsilon = 0.01;
};

/// P_S^i(t): probability that node i has not been exposed by the end of day t.
class DmpMarginals {
 public:
  DmpMarginals() = default;
  DmpMarginals(Day t0, Day t_end, std::size_t nodes);

  Day t0() const { return t0_; }
  Day t_end() const { return t_end_; }
  std::size_t node_count() const { return nodes_; }

  /// 1 before t0; days past t_end are clamped to t_end.
  double susceptible(NodeId i, Day t) const;
  double& at(NodeId i, Day t) { return values_[index(i, t)]; }

 private:
  std::size_t index(NodeId i, Day t) const {
    return static_cast<std::size_t>(t - t0_) * nodes_ + i;
  }

  Day t0_ = 0;
  Day t_end_ = 0;
  std::size_t nodes_ = 0;
  std::vector<double> values_;
};

DmpMarginals dmp_marginals(const DmpModel& model, NodeId source, Day t0, Day t_end,
                           DmpOptions options = {});

/// Exact P_S^i(t) on a tree by convolving per-edge delay distributions
/// along the path from the source. Throws if the graph has a cycle in the
/// source's component.
DmpMarginals tree_exact_marginals(const DmpModel& model, NodeId source, Day t0, Day t_end);

struct CandidatePair {
  NodeId node = kNoNode;
  Day start = 0;
  double score = 0.0;  // log-likelihood proxy

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

struct FeasibleOptions {
  std::size_t k1 = 5;
  std::size_t k2 = 5;
  std::optional<Day> t_min;  // default: earliest seed exposure - 100
};

/// Backward search over (node, exposure day) pairs for sources that can
/// explain the k1 earliest symptomatic observations, honoring the exposure
/// bounds of every observation. Returns up to k2 pairs, latest start first.
std::vector<CandidatePair> feasible_sources(std::span<const Observation> observations,
                                            const Graph& g, const EpidemicParams& params,
                                            const FeasibleOptions& options = {});

/// Log-likelihood of the observations under the given marginals.
double observation_log_score(const DmpMarginals& m, std::span<const Observation> observations,
                             const EpidemicParams& params);

/// Scores candidates with the star-graph message passing model and returns
/// them with their scores filled in.
std::vector<CandidatePair> score_candidates(std::vector<CandidatePair> candidates,
                                            const StarGraph& star,
                                            std::span<const Observation> observations,
                                            const EpidemicParams& params,
                                            DmpOptions options = {});

struct RandomDmpConfig {
  std::size_t sensors = 0;
  FeasibleOptions feasible;
  DmpOptions dmp;
  std::uint64_t seed = 1;
};

struct DmpOutcome {
  NodeId estimate = kNoNode;
  std::vector<CandidatePair> candidates;
  std::vector<Observation> observations;
  Ledger ledger;
  Day finish_day = 0;
  EstimateCheck success;
};

/// Random sensors, reverse dissemination, then message-passing scoring.
DmpOutcome run_random_dmp(Session& session, const RandomDmpConfig& cfg);

}  // namespace sdct
