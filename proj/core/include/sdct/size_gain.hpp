#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sdct/detect.hpp"
#include "sdct/observation.hpp"

namespace sdct {

/// All-pairs hop distances of a static graph; -1 when unreachable.
class DistanceTable {
 public:
  explicit DistanceTable(const Graph& g);

  int operator()(NodeId a, NodeId b) const { return dist_[a * n_ + b]; }
  std::size_t node_count() const { return n_; }

 private:
  std::size_t n_;
  std::vector<std::int16_t> dist_;
};

struct SgConfig {
  std::optional<double> sigma;  // default sqrt(1-p_i)/p_i, floored at 0.5
  std::optional<double> mu;     // default T_E + (1-p_i)/p_i
  Day deadline_day = kNever;
  std::size_t max_hypotheses = 1'000'000;
  std::size_t sampled_hypotheses = 200;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Delay model behind the candidate constraints: an infection crosses one
/// edge in `mu` days on average with spread `sigma` per hop.
struct SgModel {
  double mu = 1.0;
  double sigma = 1.0;
  Day T_E = 0;
  Day T_P = 0;
  Day T_H = 0;

  static SgModel from(const EpidemicParams& params, const SgConfig& cfg);
};

/// Whether source candidate `c` is consistent with every pair of
/// observations. Symptomatic pairs use a two-sided bound; pairs involving a
/// negative or asymptomatic answer only bound one direction.
bool sg_consistent(NodeId c, std::span<const Observation> observations,
                   const DistanceTable& dist, const SgModel& model);

std::vector<NodeId> sg_filter(std::span<const NodeId> candidates,
                              std::span<const Observation> observations,
                              const DistanceTable& dist, const SgModel& model);

struct SgState {
  std::vector<NodeId> candidates;
  std::vector<Observation> observations;
  std::vector<char> tested;  // per node
};

/// The `count` untested nodes with the largest expected number of removed
/// candidates if tested on day `today`, under a uniform prior over
/// (candidate, start day) hypotheses. Ties go to the lower id.
std::vector<NodeId> sg_next_sensors(const SgState& state, const DistanceTable& dist,
                                    const SgModel& model, const SgConfig& cfg, Day today,
                                    std::size_t count, Rng& rng);

struct SgOutcome {
  NodeId estimate = kNoNode;
  std::vector<NodeId> final_candidates;
  std::vector<Observation> observations;
  Ledger ledger;
  Day finish_day = 0;
  EstimateCheck success;
};

SgOutcome run_sg(Session& session, const SgConfig& cfg);

}  // namespace sdct
