#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "dagbandit/bounds.hpp"
#include "dagbandit/domain.hpp"
#include "dagbandit/state_key.hpp"

namespace dagbandit {

/// Dense node index. Ids are assigned in insertion order, and a node is only
/// ever linked to parents that already exist, so ids are a topological order.
using NodeId = std::uint32_t;

struct NodeStats {
  std::uint64_t n_samples = 0;  // N_l
  double mean = 0.0;            // running sample mean
  std::uint64_t visits = 0;     // T_s, traversals through the node
  Interval bounds = kUnvisitedInterval;
  std::optional<NodeId> rep_child;  // argmax-U child, lowest id on ties
  bool exact = false;               // value fixed by a deterministic oracle
};

/// Bound recomputations caused by one sample.
struct UpdateCount {
  std::size_t recomputed = 0;  // nodes whose bounds were recomputed (early cutoff)
  std::size_t full = 0;        // the leaf plus all of its ancestors
};

/// The explored sub-DAG D_t of a domain, with confidence-bound propagation.
/// Not thread-safe; one writer per instance.
class SearchDag {
 public:
  /// Creates a DAG holding only the root. `domain` must outlive the DAG.
  SearchDag(const Domain& domain, ExplorationFn beta);

  const Domain& domain() const { return *domain_; }
  const ExplorationFn& exploration() const { return beta_; }

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(const StateKey& state) const { return index_.contains(state); }
  std::optional<NodeId> find(const StateKey& state) const;

  const StateKey& key(NodeId id) const { return nodes_.at(id).key; }
  std::span<const NodeId> children(NodeId id) const { return nodes_.at(id).children; }
  std::span<const NodeId> parents(NodeId id) const { return nodes_.at(id).parents; }
  const NodeStats& stats(NodeId id) const { return nodes_.at(id).stats; }
  Interval bounds(NodeId id) const { return nodes_.at(id).stats.bounds; }
  int depth(NodeId id) const { return nodes_.at(id).depth; }

  /// Member of L_t: no children in D_t.
  bool is_temp_leaf(NodeId id) const { return nodes_.at(id).children.empty(); }
  /// Member of the domain's terminal set L.
  bool is_terminal(NodeId id) const { return nodes_.at(id).terminal; }
  /// Some domain child of the node is not yet in D_t. Children that entered
  /// D_t through another parent before this node existed are not linked to
  /// it, and do not count as expandable either.
  bool is_expandable(NodeId id) const {
    return nodes_.at(id).present_children < nodes_.at(id).domain_children;
  }
  std::vector<StateKey> unrealized_children(NodeId id) const;

  std::size_t temp_leaf_count() const { return temp_leaves_; }
  /// |L*_t|: nodes that have been a temporary leaf since the last reset.
  std::size_t explored_leaf_count() const { return explored_leaves_; }
  /// Starts the |L*_t| count from the current leaf set (|L_0|).
  void reset_explored_leaf_count() { explored_leaves_ = temp_leaves_; }

  /// Adds `state` with edges from every parent already present.
  /// Throws DuplicateStateError if present, StructuralError if no parent is.
  NodeId insert_node(const StateKey& state);

  /// Follows representative children down to a temporary leaf.
  NodeId representative_leaf(NodeId id) const;

  /// Folds sample `x` into the leaf and repropagates bounds upward.
  UpdateCount record_sample(NodeId leaf, double x);
  /// Pins a leaf to a known value: L = U = x.
  UpdateCount record_exact(NodeId leaf, double x);

  void add_visit(NodeId id) { ++nodes_.at(id).stats.visits; }

  /// Recomputes every node's bounds from scratch. Returns the node count.
  std::size_t refresh_all();

  /// Bounds recomputed while restructuring (insertions, refreshes).
  std::uint64_t structural_updates() const { return structural_updates_; }

  /// `parent_key<TAB>child_key` per edge, in node order.
  void write_edges(std::ostream& out) const;
  /// `key<TAB>N<TAB>mean<TAB>L<TAB>U` per node.
  void write_stats(std::ostream& out) const;

 private:
  struct Node {
    StateKey key;
    std::vector<NodeId> children;  // ascending ids
    std::vector<NodeId> parents;
    NodeStats stats;
    std::size_t domain_children = 0;
    std::size_t present_children = 0;  // domain children present in D_t
    int depth = 0;
    bool terminal = false;
  };

  Interval leaf_bounds(const Node& node) const;
  // Returns true if the stored bounds or representative child changed.
  bool recompute(NodeId id);
  std::size_t propagate_to_parents(NodeId start);
  std::size_t count_ancestors(NodeId start) const;
  void on_leaf_count_changed();

  const Domain* domain_;
  ExplorationFn beta_;
  std::vector<Node> nodes_;
  std::unordered_map<StateKey, NodeId, StateKeyHash> index_;
  std::size_t temp_leaves_ = 0;
  std::size_t explored_leaves_ = 0;
  std::uint64_t structural_updates_ = 0;

  // scratch for propagation / ancestor walks
  std::vector<std::uint8_t> queued_;
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t epoch_ = 0;
};

}  // namespace dagbandit
