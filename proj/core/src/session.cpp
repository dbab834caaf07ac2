#include "sdct/session.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"

namespace sdct {

const char* to_string(TestResult::Kind k) {
  switch (k) {
    case TestResult::Kind::kNegative: return "negative";
    case TestResult::Kind::kPositiveNoOnset: return "positive_no_onset";
    case TestResult::Kind::kPositiveOnset: return "positive_onset";
  }
  return "?";
}

Session::Session(std::shared_ptr<const ContactNetwork> network, EpidemicParams params,
                 Outbreak outbreak, std::uint64_t seed, SessionOptions options)
    : network_(std::move(network)),
      params_(params),
      state_(std::move(outbreak.state)),
      rng_(seed),
      options_(options),
      h_(outbreak.h),
      t_h_(outbreak.t_h),
      clock_(outbreak.t_h) {
  if (!network_) throw ParameterError("session: null network");
  params_.validate();
  if (!state_.is_infected(h_)) throw ParameterError("session: first hospitalized node is not infected");
  population_ = options_.population ? options_.population : network_->node_count();
  cap_ = options_.daily_test_cap
             ? options_.daily_test_cap
             : static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(population_)));
  if (cap_ == 0) cap_ = 1;
  trace("open", h_, nlohmann::json{{"t_h", t_h_}, {"cap", cap_}}.dump());
}

Session Session::open(std::shared_ptr<const ContactNetwork> network,
                      const EpidemicParams& params, NodeId source, std::uint64_t seed,
                      SessionOptions options) {
  Rng rng(seed);
  auto outbreak = run_until_first_hospitalization(*network, source, params, rng);
  if (!outbreak) throw NoOutbreakError("session: the epidemic ended without a hospitalization");
  return Session(std::move(network), params, std::move(*outbreak), mix_seed(seed), options);
}

Day Session::first_hospitalized_onset() const {
  return t_h_ - (params_.T_H - params_.effective_T_P());
}

void Session::check(NodeId v) const {
  if (!network_->contains(v)) throw LookupError("session: unknown node " + std::to_string(v));
}

void Session::trace(const char* event, NodeId node, const std::string& payload_json) const {
  if (!options_.trace) return;
  nlohmann::json line{{"day", clock_}, {"event", event}};
  line["node"] = node == kNoNode ? nlohmann::json(nullptr) : nlohmann::json(node);
  line["payload"] = nlohmann::json::parse(payload_json);
  *options_.trace << line.dump() << '\n';
}

std::vector<NodeId> Session::query_household(NodeId v) {
  check(v);
  ++ledger_.household_queries;
  auto members = household_members(*network_, v);
  trace("household", v, nlohmann::json(members).dump());
  return members;
}

void Session::reveal_edge(NodeId a, NodeId b) {
  const auto lo = std::min(a, b), hi = std::max(a, b);
  if (revealed_.insert((std::uint64_t{lo} << 32) | hi).second) ++ledger_.edges_revealed;
}

std::vector<NodeId> Session::query_contacts(NodeId v, std::optional<ContactWindow>) {
  check(v);
  ++ledger_.contact_queries;
  auto nbrs = network_->neighbors(v);
  std::vector<NodeId> out(nbrs.begin(), nbrs.end());
  for (NodeId u : out) reveal_edge(v, u);
  trace("contacts", v, nlohmann::json(out).dump());
  return out;
}

const Graph& Session::reveal_full_network() {
  const auto* g = dynamic_cast<const Graph*>(network_.get());
  if (!g) throw ParameterError("session: full network reveal needs a static graph");
  for (NodeId v = 0; v < g->node_count(); ++v) {
    for (NodeId u : g->neighbors(v)) {
      if (v < u) reveal_edge(v, u);
    }
  }
  trace("reveal_network", kNoNode, nlohmann::json{{"edges", g->edge_count()}}.dump());
  return *g;
}

TestResult Session::evaluate(NodeId v) const {
  const auto& tl = state_.timeline(v);
  const Day at = state_.day;
  if (!tl.infected() || at < tl.exposure_day + params_.T_E) return TestResult::negative();
  if (tl.symptomatic() && at >= tl.onset_day) return TestResult::positive_onset(tl.onset_day);
  return TestResult::positive_no_onset();
}

void Session::dispatch(NodeId v) {
  ++dispatched_today_;
  ++ledger_.tests;
  in_flight_.push_back({v, clock_, evaluate(v)});
  trace("dispatch", v, "{}");
}

void Session::submit_test(NodeId v) {
  check(v);
  trace("submit", v, "{}");
  if (pending_.empty() && dispatched_today_ < cap_) {
    dispatch(v);
  } else {
    pending_.push_back(v);
  }
}

std::size_t Session::tests_available_today() const {
  const auto used = dispatched_today_ + pending_.size();
  return used >= cap_ ? 0 : cap_ - used;
}

std::vector<TestReport> Session::advance_day() {
  if (!options_.freeze_epidemic) step(state_, *network_, params_, rng_);
  ++clock_;
  ledger_.days_elapsed = clock_ - t_h_;
  dispatched_today_ = 0;
  std::vector<TestReport> arrived;
  while (!in_flight_.empty() && in_flight_.front().dispatch_day < clock_) {
    arrived.push_back(in_flight_.front());
    in_flight_.pop_front();
  }
  while (!pending_.empty() && dispatched_today_ < cap_) {
    const NodeId v = pending_.front();
    pending_.pop_front();
    dispatch(v);
  }
  for (const auto& r : arrived) {
    nlohmann::json payload{{"result", to_string(r.result.kind)}};
    if (r.result.kind == TestResult::Kind::kPositiveOnset) payload["onset"] = r.result.onset;
    trace("result", r.node, payload.dump());
  }
  return arrived;
}

}  // namespace sdct
