#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dagbandit/state_key.hpp"

namespace dagbandit {

/// The full (implicit) search graph. Children and parents are computed on
/// demand; nothing is materialized eagerly.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual StateKey root() const = 0;
  virtual std::vector<StateKey> children(const StateKey& state) const = 0;
  virtual std::vector<StateKey> parents(const StateKey& state) const = 0;
  virtual std::size_t child_count(const StateKey& state) const = 0;
  /// Membership in the terminal leaf set L.
  virtual bool is_terminal(const StateKey& state) const = 0;
  /// Number of moves from the root. Every root-to-state path has this length.
  virtual int depth(const StateKey& state) const { return static_cast<int>(state.size()); }
  /// Number of distinct non-stop moves.
  virtual std::size_t feature_count() const = 0;
  /// True when transpositions share one node.
  virtual bool merges_transpositions() const = 0;
  virtual std::string name() const = 0;
  /// The position a state denotes, ignoring move order. Equal to the state
  /// itself when transpositions are merged.
  virtual StateKey position(const StateKey& state) const { return state; }

  /// The move that leads from `parent` to `child` (`stop_move()` for the stopping move).
  Feature added_move(const StateKey& parent, const StateKey& child) const;
  Feature stop_move() const { return static_cast<Feature>(feature_count()); }
};

/// Powerset lattice over `n` features with the virtual stopping feature:
/// C(F) = {F+f : f not in F} + {F+stop}; terminal iff stop is present.
class FeatureLattice final : public Domain {
 public:
  explicit FeatureLattice(std::size_t n_features);

  StateKey root() const override { return {}; }
  std::vector<StateKey> children(const StateKey& state) const override;
  std::vector<StateKey> parents(const StateKey& state) const override;
  std::size_t child_count(const StateKey& state) const override;
  bool is_terminal(const StateKey& state) const override { return state.stop; }
  std::size_t feature_count() const override { return n_; }
  bool merges_transpositions() const override { return true; }
  std::string name() const override { return "fs"; }

 private:
  std::size_t n_;
};

/// Feature subsets truncated at depth d_L; the leaves are the d_L-subsets.
class FixedDepthLattice final : public Domain {
 public:
  FixedDepthLattice(std::size_t n_features, std::size_t leaf_depth);

  StateKey root() const override { return {}; }
  std::vector<StateKey> children(const StateKey& state) const override;
  std::vector<StateKey> parents(const StateKey& state) const override;
  std::size_t child_count(const StateKey& state) const override;
  bool is_terminal(const StateKey& state) const override { return state.items.size() == depth_; }
  std::size_t feature_count() const override { return n_; }
  bool merges_transpositions() const override { return true; }
  std::string name() const override { return "lattice"; }
  std::size_t leaf_depth() const { return depth_; }

 private:
  std::size_t n_;
  std::size_t depth_;
};

/// Redundant tree over ordered feature sequences of length d_L. No merging.
class FixedDepthTree final : public Domain {
 public:
  FixedDepthTree(std::size_t n_features, std::size_t leaf_depth);

  StateKey root() const override { return {}; }
  std::vector<StateKey> children(const StateKey& state) const override;
  std::vector<StateKey> parents(const StateKey& state) const override;
  std::size_t child_count(const StateKey& state) const override;
  bool is_terminal(const StateKey& state) const override { return state.items.size() == depth_; }
  std::size_t feature_count() const override { return n_; }
  bool merges_transpositions() const override { return false; }
  std::string name() const override { return "tree"; }
  StateKey position(const StateKey& state) const override;
  std::size_t leaf_depth() const { return depth_; }

 private:
  std::size_t n_;
  std::size_t depth_;
};

/// Explicit single-rooted DAG over integer vertex labels 0..n-1 with root 0.
/// States are single-item keys {v}. Depth is the longest path from the root.
class ExplicitDag final : public Domain {
 public:
  /// Throws InputError on cycles, bad labels, or vertices unreachable from 0.
  ExplicitDag(std::size_t n_vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  StateKey root() const override { return key(0); }
  std::vector<StateKey> children(const StateKey& state) const override;
  std::vector<StateKey> parents(const StateKey& state) const override;
  std::size_t child_count(const StateKey& state) const override;
  bool is_terminal(const StateKey& state) const override;
  int depth(const StateKey& state) const override;
  std::size_t feature_count() const override { return children_.size(); }
  bool merges_transpositions() const override { return true; }
  std::string name() const override { return "explicit"; }

  static StateKey key(std::size_t vertex) { return StateKey{{static_cast<Feature>(vertex)}, false}; }
  static std::size_t vertex(const StateKey& state) { return state.items.at(0); }

 private:
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<int> depth_;
};

/// Enumerates every state of a finite domain, parents before children.
std::vector<StateKey> enumerate_states(const Domain& domain, std::size_t limit = 1'000'000);

}  // namespace dagbandit
