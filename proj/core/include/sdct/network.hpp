#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sdct/types.hpp"

namespace sdct {

/// Read-only view of a contact network with a household partition.
///
/// Implementations may materialize nodes lazily (the Red-Blue tree does),
/// which is why `node_count()` reports the nodes that exist *so far*.
/// Spans returned by `neighbors` and `household` stay valid for the
/// lifetime of the network.
class ContactNetwork {
 public:
  virtual ~ContactNetwork() = default;

  virtual std::size_t node_count() const = 0;
  virtual std::span<const NodeId> neighbors(NodeId v) const = 0;
  virtual std::span<const NodeId> household(NodeId v) const = 0;
  virtual HouseholdId household_of(NodeId v) const = 0;

  bool contains(NodeId v) const { return v < node_count(); }
};

struct NetworkParams {
  std::size_t n = 399;
  std::size_t d_h = 2;  // household size - 1
  std::size_t d_c = 3;  // external half-edges per node

  /// Throws ParameterError when an invariant does not hold.
  void validate() const;
  std::size_t household_size() const { return d_h + 1; }
};

/// Static undirected graph with dense node ids and a household partition.
class Graph final : public ContactNetwork {
 public:
  Graph() = default;

  /// Builds from symmetric adjacency lists. Neighbor lists are sorted;
  /// self-loops, duplicates and asymmetric entries raise ParameterError.
  Graph(std::vector<std::vector<NodeId>> adjacency,
        std::vector<HouseholdId> household_of);

  std::size_t node_count() const override { return adjacency_.size(); }
  std::span<const NodeId> neighbors(NodeId v) const override;
  std::span<const NodeId> household(NodeId v) const override;
  HouseholdId household_of(NodeId v) const override;

  std::size_t household_count() const { return households_.size(); }
  std::span<const NodeId> household_members(HouseholdId h) const;
  std::size_t edge_count() const { return edges_; }
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  bool has_edge(NodeId u, NodeId v) const;

  const std::vector<std::vector<NodeId>>& adjacency() const { return adjacency_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_ && a.household_of_ == b.household_of_;
  }

 private:
  void check(NodeId v) const;

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<HouseholdId> household_of_;
  std::vector<std::vector<NodeId>> households_;
  std::size_t edges_ = 0;
};

/// Household Network Model statistics from one generation run.
struct HnmStats {
  std::size_t pairings = 0;   // half-edge pairs formed
  std::size_t discarded = 0;  // self-loops and multi-edges dropped
};

/// Household Network Model: cliques of size d_h+1 over dense ids
/// (household of v is v / (d_h+1)), plus a configuration-model pairing of
/// d_c half-edges per node. Offending pairs are dropped, never re-paired.
Graph generate_hnm(const NetworkParams& params, std::uint64_t seed,
                   HnmStats* stats = nullptr);

/// Contents of `household(v)` including v itself.
std::vector<NodeId> household_members(const ContactNetwork& g, NodeId v);

/// Hop distances from `from`; unreachable nodes get -1.
std::vector<int> bfs_distances(const Graph& g, NodeId from);

// Debug/golden text format:
//   # sdct-graph v1
//   nodes <n>
//   <id>: <nbr>,<nbr>,...
//   households <h>
//   <hid>: <member>,<member>,...
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);

enum class RBColor : std::uint8_t { kRed, kBlue };

/// The infinite Red-Blue tree, materialized on demand.
///
/// Root is red with d_c red and d_h blue children; every other red node has
/// d_c-1 red and d_h blue children; blue nodes have d_c red children. A
/// household is a red node together with its blue children. Children are
/// created in a fixed order (red first, then blue) the first time a node's
/// neighborhood or household is requested, so ids are a deterministic
/// function of the access sequence and every node also carries its
/// child-index address from the root.
class RBTree final : public ContactNetwork {
 public:
  RBTree(std::size_t d_c, std::size_t d_h);

  static constexpr NodeId kRoot = 0;

  std::size_t node_count() const override { return nodes_.size(); }
  std::span<const NodeId> neighbors(NodeId v) const override;
  std::span<const NodeId> household(NodeId v) const override;
  HouseholdId household_of(NodeId v) const override;

  std::span<const NodeId> children(NodeId v) const;
  NodeId parent(NodeId v) const;
  RBColor color(NodeId v) const;
  std::size_t depth(NodeId v) const;

  /// Child-index path from the root (empty for the root).
  std::vector<std::uint32_t> address(NodeId v) const;
  /// Node at `address`, materializing along the way.
  NodeId find(std::span<const std::uint32_t> address) const;

  std::size_t d_c() const { return d_c_; }
  std::size_t d_h() const { return d_h_; }

 private:
  struct Record {
    NodeId parent = kNoNode;
    std::uint32_t child_index = 0;
    std::uint32_t depth = 0;
    RBColor color = RBColor::kRed;
    bool expanded = false;
    std::vector<NodeId> children;
    std::vector<NodeId> neighbors;   // parent first, then children
    std::vector<NodeId> household;   // red nodes only: self + blue children
  };

  void check(NodeId v) const;
  void expand(NodeId v) const;
  HouseholdId red_of(NodeId v) const;

  std::size_t d_c_;
  std::size_t d_h_;
  mutable std::vector<Record> nodes_;
};

/// Number of red and blue children of an RB node (the lazy tree uses this).
struct RBChildCounts {
  std::size_t red = 0;
  std::size_t blue = 0;
};
RBChildCounts rb_child_counts(RBColor color, bool is_root, std::size_t d_c,
                              std::size_t d_h);

}  // namespace sdct
