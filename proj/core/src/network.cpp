#include "sdct/network.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sdct {

void NetworkParams::validate() const {
  if (n == 0) throw ParameterError("network: n must be positive");
  if (d_c < 1) throw ParameterError("network: d_c must be at least 1");
  if (n % (d_h + 1) != 0) {
    throw ParameterError("network: n=" + std::to_string(n) +
                         " is not divisible by household size " +
                         std::to_string(d_h + 1));
  }
}

Graph::Graph(std::vector<std::vector<NodeId>> adjacency,
             std::vector<HouseholdId> household_of)
    : adjacency_(std::move(adjacency)), household_of_(std::move(household_of)) {
  const auto n = adjacency_.size();
  if (household_of_.size() != n) {
    throw ParameterError("graph: household map size differs from node count");
  }
  std::size_t degree_sum = 0;
  for (NodeId v = 0; v < n; ++v) {
    auto& nbrs = adjacency_[v];
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw ParameterError("graph: multi-edge at node " + std::to_string(v));
    }
    for (NodeId u : nbrs) {
      if (u == v) throw ParameterError("graph: self-loop at node " + std::to_string(v));
      if (u >= n) throw ParameterError("graph: neighbor id out of range");
    }
    degree_sum += nbrs.size();
  }
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : adjacency_[v]) {
      if (!std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v)) {
        throw ParameterError("graph: adjacency is not symmetric");
      }
    }
  }
  edges_ = degree_sum / 2;

  HouseholdId max_h = 0;
  for (auto h : household_of_) max_h = std::max(max_h, h);
  households_.assign(n == 0 ? 0 : max_h + 1, {});
  for (NodeId v = 0; v < n; ++v) households_[household_of_[v]].push_back(v);
}

void Graph::check(NodeId v) const {
  if (v >= adjacency_.size()) {
    throw LookupError("graph: unknown node " + std::to_string(v));
  }
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check(v);
  return adjacency_[v];
}

std::span<const NodeId> Graph::household(NodeId v) const {
  check(v);
  return households_[household_of_[v]];
}

HouseholdId Graph::household_of(NodeId v) const {
  check(v);
  return household_of_[v];
}

std::span<const NodeId> Graph::household_members(HouseholdId h) const {
  if (h >= households_.size()) {
    throw LookupError("graph: unknown household " + std::to_string(h));
  }
  return households_[h];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

Graph generate_hnm(const NetworkParams& params, std::uint64_t seed, HnmStats* stats) {
  params.validate();
  const std::size_t n = params.n;
  const std::size_t size = params.household_size();

  std::vector<std::vector<NodeId>> adjacency(n);
  std::vector<HouseholdId> household_of(n);
  for (NodeId v = 0; v < n; ++v) {
    household_of[v] = static_cast<HouseholdId>(v / size);
    const NodeId first = static_cast<NodeId>((v / size) * size);
    for (NodeId u = first; u < first + size; ++u) {
      if (u != v) adjacency[v].push_back(u);
    }
  }

  std::vector<NodeId> half_edges;
  half_edges.reserve(n * params.d_c);
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < params.d_c; ++i) half_edges.push_back(v);
  }
  Rng rng(seed);
  std::shuffle(half_edges.begin(), half_edges.end(), rng);

  HnmStats local;
  for (std::size_t i = 0; i + 1 < half_edges.size(); i += 2) {
    const NodeId a = half_edges[i];
    const NodeId b = half_edges[i + 1];
    ++local.pairings;
    const bool self_loop = a == b;
    const bool multi =
        !self_loop && std::find(adjacency[a].begin(), adjacency[a].end(), b) !=
                          adjacency[a].end();
    if (self_loop || multi) {
      ++local.discarded;
      continue;
    }
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  if (stats) *stats = local;
  return Graph(std::move(adjacency), std::move(household_of));
}

std::vector<NodeId> household_members(const ContactNetwork& g, NodeId v) {
  auto h = g.household(v);
  return {h.begin(), h.end()};
}

std::vector<int> bfs_distances(const Graph& g, NodeId from) {
  std::vector<int> dist(g.node_count(), -1);
  std::deque<NodeId> frontier{from};
  dist.at(from) = 0;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop_front();
    for (NodeId u : g.neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        frontier.push_back(u);
      }
    }
  }
  return dist;
}

namespace {

void write_list(std::ostream& out, std::span<const NodeId> ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << ',';
    out << ids[i];
  }
}

std::pair<std::size_t, std::vector<NodeId>> parse_entry(const std::string& line) {
  const auto colon = line.find(':');
  if (colon == std::string::npos) throw ParameterError("graph text: missing ':' in '" + line + "'");
  const std::size_t id = std::stoul(line.substr(0, colon));
  std::vector<NodeId> ids;
  std::stringstream rest(line.substr(colon + 1));
  std::string tok;
  while (std::getline(rest, tok, ',')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    ids.push_back(static_cast<NodeId>(std::stoul(tok)));
  }
  return {id, std::move(ids)};
}

}  // namespace

void write_graph(std::ostream& out, const Graph& g) {
  out << "# sdct-graph v1\n";
  out << "nodes " << g.node_count() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << v << ": ";
    write_list(out, g.neighbors(v));
    out << '\n';
  }
  out << "households " << g.household_count() << '\n';
  for (HouseholdId h = 0; h < g.household_count(); ++h) {
    out << h << ": ";
    write_list(out, g.household_members(h));
    out << '\n';
  }
}

Graph read_graph(std::istream& in) {
  std::string line;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  if (!next() || line.rfind("nodes ", 0) != 0) throw ParameterError("graph text: expected 'nodes <n>'");
  const std::size_t n = std::stoul(line.substr(6));
  std::vector<std::vector<NodeId>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next()) throw ParameterError("graph text: truncated adjacency section");
    auto [id, nbrs] = parse_entry(line);
    if (id >= n) throw ParameterError("graph text: node id out of range");
    adjacency[id] = std::move(nbrs);
  }
  if (!next() || line.rfind("households ", 0) != 0) {
    throw ParameterError("graph text: expected 'households <h>'");
  }
  const std::size_t h = std::stoul(line.substr(11));
  std::vector<HouseholdId> household_of(n, 0);
  for (std::size_t i = 0; i < h; ++i) {
    if (!next()) throw ParameterError("graph text: truncated household section");
    auto [id, members] = parse_entry(line);
    for (NodeId v : members) {
      if (v >= n) throw ParameterError("graph text: household member out of range");
      household_of[v] = static_cast<HouseholdId>(id);
    }
  }
  return Graph(std::move(adjacency), std::move(household_of));
}

// ---------------------------------------------------------------------------
// Red-Blue tree

RBChildCounts rb_child_counts(RBColor color, bool is_root, std::size_t d_c,
                              std::size_t d_h) {
  if (color == RBColor::kBlue) return {d_c, 0};
  return {is_root ? d_c : d_c - 1, d_h};
}

RBTree::RBTree(std::size_t d_c, std::size_t d_h) : d_c_(d_c), d_h_(d_h) {
  if (d_c < 1) throw ParameterError("rb tree: d_c must be at least 1");
  nodes_.emplace_back();
}

void RBTree::check(NodeId v) const {
  if (v >= nodes_.size()) {
    throw LookupError("rb tree: unknown node " + std::to_string(v));
  }
}

void RBTree::expand(NodeId v) const {
  if (nodes_[v].expanded) return;
  const auto counts = rb_child_counts(nodes_[v].color, v == kRoot, d_c_, d_h_);
  const auto total = counts.red + counts.blue;
  const auto first = static_cast<NodeId>(nodes_.size());
  const auto depth = nodes_[v].depth + 1;
  for (std::size_t i = 0; i < total; ++i) {
    Record child;
    child.parent = v;
    child.child_index = static_cast<std::uint32_t>(i);
    child.depth = depth;
    child.color = i < counts.red ? RBColor::kRed : RBColor::kBlue;
    nodes_.push_back(std::move(child));
  }
  // nodes_ may have reallocated; take the reference afterwards.
  Record& rec = nodes_[v];
  rec.expanded = true;
  if (rec.parent != kNoNode) rec.neighbors.push_back(rec.parent);
  for (std::size_t i = 0; i < total; ++i) {
    rec.children.push_back(first + static_cast<NodeId>(i));
    rec.neighbors.push_back(first + static_cast<NodeId>(i));
  }
  if (rec.color == RBColor::kRed) {
    rec.household.push_back(v);
    for (std::size_t i = counts.red; i < total; ++i) {
      rec.household.push_back(first + static_cast<NodeId>(i));
    }
  }
}

std::span<const NodeId> RBTree::neighbors(NodeId v) const {
  check(v);
  expand(v);
  return nodes_[v].neighbors;
}

std::span<const NodeId> RBTree::children(NodeId v) const {
  check(v);
  expand(v);
  return nodes_[v].children;
}

HouseholdId RBTree::red_of(NodeId v) const {
  return nodes_[v].color == RBColor::kRed ? v : nodes_[v].parent;
}

std::span<const NodeId> RBTree::household(NodeId v) const {
  check(v);
  const NodeId red = red_of(v);
  expand(red);
  return nodes_[red].household;
}

HouseholdId RBTree::household_of(NodeId v) const {
  check(v);
  return red_of(v);
}

NodeId RBTree::parent(NodeId v) const {
  check(v);
  return nodes_[v].parent;
}

RBColor RBTree::color(NodeId v) const {
  check(v);
  return nodes_[v].color;
}

std::size_t RBTree::depth(NodeId v) const {
  check(v);
  return nodes_[v].depth;
}

std::vector<std::uint32_t> RBTree::address(NodeId v) const {
  check(v);
  std::vector<std::uint32_t> path;
  for (NodeId cur = v; cur != kRoot; cur = nodes_[cur].parent) {
    path.push_back(nodes_[cur].child_index);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

NodeId RBTree::find(std::span<const std::uint32_t> address) const {
  NodeId cur = kRoot;
  for (auto idx : address) {
    auto kids = children(cur);
    if (idx >= kids.size()) throw LookupError("rb tree: address beyond child count");
    cur = kids[idx];
  }
  return cur;
}

}  // namespace sdct
