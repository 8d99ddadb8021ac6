#include "dagbandit/search_dag.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <queue>

#include "dagbandit/errors.hpp"

namespace dagbandit {

SearchDag::SearchDag(const Domain& domain, ExplorationFn beta) : domain_(&domain), beta_(beta) {
  Node root;
  root.key = domain.root();
  root.domain_children = domain.child_count(root.key);
  root.depth = domain.depth(root.key);
  root.terminal = domain.is_terminal(root.key);
  index_.emplace(root.key, 0);
  nodes_.push_back(std::move(root));
  queued_.push_back(0);
  stamp_.push_back(0);
  temp_leaves_ = 1;
  explored_leaves_ = 1;
}

std::optional<NodeId> SearchDag::find(const StateKey& state) const {
  auto it = index_.find(state);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<StateKey> SearchDag::unrealized_children(NodeId id) const {
  std::vector<StateKey> out;
  for (auto& c : domain_->children(nodes_.at(id).key)) {
    if (!index_.contains(c)) out.push_back(std::move(c));
  }
  return out;
}

NodeId SearchDag::insert_node(const StateKey& state) {
  if (index_.contains(state)) throw DuplicateStateError("state already in DAG: " + to_string(state));
  std::vector<NodeId> present;
  for (const auto& p : domain_->parents(state)) {
    if (auto it = index_.find(p); it != index_.end()) present.push_back(it->second);
  }
  std::size_t present_children = 0;
  if (!present.empty()) {
    for (const auto& c : domain_->children(state)) present_children += index_.contains(c) ? 1 : 0;
  }
  if (present.empty()) {
    throw StructuralError("no parent of " + to_string(state) + " is in the DAG");
  }
  std::sort(present.begin(), present.end());

  // The new node has no outgoing edges, so linking it cannot close a cycle.
  const auto id = static_cast<NodeId>(nodes_.size());
  Node node;
  node.key = state;
  node.parents = present;
  node.domain_children = domain_->child_count(state);
  node.present_children = present_children;
  node.depth = domain_->depth(state);
  node.terminal = domain_->is_terminal(state);
  nodes_.push_back(std::move(node));
  queued_.push_back(0);
  stamp_.push_back(0);
  index_.emplace(state, id);

  std::size_t leaves_lost = 0;
  for (NodeId p : present) {
    if (nodes_[p].children.empty()) ++leaves_lost;
    nodes_[p].children.push_back(id);
    ++nodes_[p].present_children;
  }
  const std::size_t before = temp_leaves_;
  temp_leaves_ = temp_leaves_ + 1 - leaves_lost;
  ++explored_leaves_;

  if (beta_.depends_on_leaf_count() && temp_leaves_ != before) {
    on_leaf_count_changed();
  } else {
    recompute(id);
    structural_updates_ += 1 + propagate_to_parents(id);
  }
  return id;
}

void SearchDag::on_leaf_count_changed() {
  // beta_1 widens every sampled leaf when |L_t| grows; rebuild the fixpoint.
  structural_updates_ += refresh_all();
}

NodeId SearchDag::representative_leaf(NodeId id) const {
  NodeId cur = id;
  while (!nodes_.at(cur).children.empty()) cur = *nodes_[cur].stats.rep_child;
  return cur;
}

Interval SearchDag::leaf_bounds(const Node& node) const {
  const NodeStats& s = node.stats;
  if (s.exact) return {s.mean, s.mean};
  if (s.n_samples == 0) return kUnvisitedInterval;
  return leaf_interval(s.mean, s.n_samples, beta_(s.n_samples, temp_leaves_));
}

bool SearchDag::recompute(NodeId id) {
  Node& node = nodes_[id];
  Interval next;
  std::optional<NodeId> rep;
  if (node.children.empty()) {
    next = leaf_bounds(node);
  } else {
    next = nodes_[node.children.front()].stats.bounds;
    rep = node.children.front();
    for (std::size_t i = 1; i < node.children.size(); ++i) {
      const Interval& c = nodes_[node.children[i]].stats.bounds;
      next.lower = std::max(next.lower, c.lower);
      if (c.upper > next.upper) {
        next.upper = c.upper;
        rep = node.children[i];
      }
    }
  }
  const bool changed = !(next == node.stats.bounds) || rep != node.stats.rep_child;
  node.stats.bounds = next;
  node.stats.rep_child = rep;
  return changed;
}

std::size_t SearchDag::propagate_to_parents(NodeId start) {
  // Max-heap on id visits nodes in reverse topological order, so each node is
  // recomputed once, after all of its changed children.
  std::priority_queue<NodeId> heap;
  for (NodeId p : nodes_[start].parents) {
    if (!queued_[p]) {
      queued_[p] = 1;
      heap.push(p);
    }
  }
  std::size_t recomputed = 0;
  while (!heap.empty()) {
    const NodeId id = heap.top();
    heap.pop();
    queued_[id] = 0;
    ++recomputed;
    if (!recompute(id)) continue;
    for (NodeId p : nodes_[id].parents) {
      if (!queued_[p]) {
        queued_[p] = 1;
        heap.push(p);
      }
    }
  }
  return recomputed;
}

std::size_t SearchDag::count_ancestors(NodeId start) const {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  std::vector<NodeId> stack{start};
  stamp_[start] = epoch_;
  std::size_t count = 0;
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    for (NodeId p : nodes_[id].parents) {
      if (stamp_[p] != epoch_) {
        stamp_[p] = epoch_;
        ++count;
        stack.push_back(p);
      }
    }
  }
  return count;
}

UpdateCount SearchDag::record_sample(NodeId leaf, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("sample value must lie in [0,1]");
  if (leaf >= nodes_.size()) throw InputError("unknown node id");
  Node& node = nodes_[leaf];
  if (!node.children.empty()) throw StructuralError("samples can only be recorded at temporary leaves");
  NodeStats& s = node.stats;
  ++s.n_samples;
  if (!s.exact) s.mean += (x - s.mean) / static_cast<double>(s.n_samples);

  UpdateCount count;
  count.full = 1 + count_ancestors(leaf);
  count.recomputed = 1;
  if (recompute(leaf)) count.recomputed += propagate_to_parents(leaf);
  return count;
}

UpdateCount SearchDag::record_exact(NodeId leaf, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("sample value must lie in [0,1]");
  if (leaf >= nodes_.size()) throw InputError("unknown node id");
  Node& node = nodes_[leaf];
  if (!node.children.empty()) throw StructuralError("samples can only be recorded at temporary leaves");
  NodeStats& s = node.stats;
  ++s.n_samples;
  s.mean = x;
  s.exact = true;

  UpdateCount count;
  count.full = 1 + count_ancestors(leaf);
  count.recomputed = 1;
  if (recompute(leaf)) count.recomputed += propagate_to_parents(leaf);
  return count;
}

std::size_t SearchDag::refresh_all() {
  for (std::size_t i = nodes_.size(); i-- > 0;) recompute(static_cast<NodeId>(i));
  return nodes_.size();
}

void SearchDag::write_edges(std::ostream& out) const {
  for (const Node& node : nodes_) {
    for (NodeId c : node.children) out << to_string(node.key) << '\t' << to_string(nodes_[c].key) << '\n';
  }
}

void SearchDag::write_stats(std::ostream& out) const {
  const auto flags = out.flags();
  out << std::setprecision(17);
  for (const Node& node : nodes_) {
    out << to_string(node.key) << '\t' << node.stats.n_samples << '\t' << node.stats.mean << '\t'
        << node.stats.bounds.lower << '\t' << node.stats.bounds.upper << '\n';
  }
  out.flags(flags);
}

}  // namespace dagbandit
