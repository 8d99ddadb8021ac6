#include "dagbandit/domain.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "dagbandit/errors.hpp"

namespace dagbandit {

Feature Domain::added_move(const StateKey& parent, const StateKey& child) const {
  if (child.stop && !parent.stop) return stop_move();
  for (Feature f : child.items) {
    if (!parent.contains(f)) return f;
  }
  throw StructuralError("state " + to_string(child) + " does not extend " + to_string(parent));
}

// ---------------------------------------------------------------------------

FeatureLattice::FeatureLattice(std::size_t n_features) : n_(n_features) {
  if (n_features == 0 || n_features >= 0xFFFF) throw InputError("feature count out of range");
}

std::vector<StateKey> FeatureLattice::children(const StateKey& state) const {
  std::vector<StateKey> out;
  if (state.stop) return out;
  out.reserve(n_ - state.items.size() + 1);
  for (std::size_t f = 0; f < n_; ++f) {
    const auto feat = static_cast<Feature>(f);
    if (!std::binary_search(state.items.begin(), state.items.end(), feat)) {
      out.push_back(with_feature_sorted(state, feat));
    }
  }
  out.push_back(with_stop(state));
  return out;
}

std::vector<StateKey> FeatureLattice::parents(const StateKey& state) const {
  std::vector<StateKey> out;
  if (state.stop) {
    StateKey p = state;
    p.stop = false;
    out.push_back(std::move(p));
    return out;
  }
  for (std::size_t i = 0; i < state.items.size(); ++i) {
    StateKey p = state;
    p.items.erase(p.items.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t FeatureLattice::child_count(const StateKey& state) const {
  return state.stop ? 0 : n_ - state.items.size() + 1;
}

// ---------------------------------------------------------------------------

FixedDepthLattice::FixedDepthLattice(std::size_t n_features, std::size_t leaf_depth)
    : n_(n_features), depth_(leaf_depth) {
  if (n_features == 0 || n_features >= 0xFFFF) throw InputError("feature count out of range");
  if (leaf_depth == 0 || leaf_depth > n_features) throw InputError("leaf depth must lie in [1, n]");
}

std::vector<StateKey> FixedDepthLattice::children(const StateKey& state) const {
  std::vector<StateKey> out;
  if (state.items.size() >= depth_) return out;
  for (std::size_t f = 0; f < n_; ++f) {
    const auto feat = static_cast<Feature>(f);
    if (!std::binary_search(state.items.begin(), state.items.end(), feat)) {
      out.push_back(with_feature_sorted(state, feat));
    }
  }
  return out;
}

std::vector<StateKey> FixedDepthLattice::parents(const StateKey& state) const {
  std::vector<StateKey> out;
  for (std::size_t i = 0; i < state.items.size(); ++i) {
    StateKey p = state;
    p.items.erase(p.items.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t FixedDepthLattice::child_count(const StateKey& state) const {
  return state.items.size() >= depth_ ? 0 : n_ - state.items.size();
}

// ---------------------------------------------------------------------------

FixedDepthTree::FixedDepthTree(std::size_t n_features, std::size_t leaf_depth)
    : n_(n_features), depth_(leaf_depth) {
  if (n_features == 0 || n_features >= 0xFFFF) throw InputError("feature count out of range");
  if (leaf_depth == 0 || leaf_depth > n_features) throw InputError("leaf depth must lie in [1, n]");
}

std::vector<StateKey> FixedDepthTree::children(const StateKey& state) const {
  std::vector<StateKey> out;
  if (state.items.size() >= depth_) return out;
  for (std::size_t f = 0; f < n_; ++f) {
    const auto feat = static_cast<Feature>(f);
    if (!state.contains(feat)) out.push_back(with_move_appended(state, feat));
  }
  return out;
}

std::vector<StateKey> FixedDepthTree::parents(const StateKey& state) const {
  if (state.items.empty()) return {};
  StateKey p = state;
  p.items.pop_back();
  return {p};
}

StateKey FixedDepthTree::position(const StateKey& state) const {
  StateKey out = state;
  std::sort(out.items.begin(), out.items.end());
  return out;
}

std::size_t FixedDepthTree::child_count(const StateKey& state) const {
  return state.items.size() >= depth_ ? 0 : n_ - state.items.size();
}

// ---------------------------------------------------------------------------

ExplicitDag::ExplicitDag(std::size_t n_vertices,
                         const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : children_(n_vertices), parents_(n_vertices), depth_(n_vertices, -1) {
  if (n_vertices == 0 || n_vertices >= 0xFFFF) throw InputError("vertex count out of range");
  for (auto [from, to] : edges) {
    if (from >= n_vertices || to >= n_vertices || from == to) throw InputError("bad edge");
    if (std::find(children_[from].begin(), children_[from].end(), to) != children_[from].end()) {
      throw InputError("duplicate edge");
    }
    children_[from].push_back(to);
    parents_[to].push_back(from);
  }
  if (!parents_[0].empty()) throw InputError("root must have no parents");
  for (auto& c : children_) std::sort(c.begin(), c.end());
  for (auto& p : parents_) std::sort(p.begin(), p.end());

  // Kahn's algorithm: longest-path depth, cycle and reachability check.
  std::vector<std::size_t> indegree(n_vertices);
  for (std::size_t v = 0; v < n_vertices; ++v) indegree[v] = parents_[v].size();
  for (std::size_t v = 1; v < n_vertices; ++v) {
    if (indegree[v] == 0) throw InputError("vertex " + std::to_string(v) + " unreachable from root");
  }
  std::deque<std::size_t> ready{0};
  depth_[0] = 0;
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    ++seen;
    for (std::size_t c : children_[v]) {
      depth_[c] = std::max(depth_[c], depth_[v] + 1);
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (seen != n_vertices) throw InputError("graph contains a cycle");
}

std::vector<StateKey> ExplicitDag::children(const StateKey& state) const {
  std::vector<StateKey> out;
  for (std::size_t c : children_.at(vertex(state))) out.push_back(key(c));
  return out;
}

std::vector<StateKey> ExplicitDag::parents(const StateKey& state) const {
  std::vector<StateKey> out;
  for (std::size_t p : parents_.at(vertex(state))) out.push_back(key(p));
  return out;
}

std::size_t ExplicitDag::child_count(const StateKey& state) const {
  return children_.at(vertex(state)).size();
}

bool ExplicitDag::is_terminal(const StateKey& state) const {
  return children_.at(vertex(state)).empty();
}

int ExplicitDag::depth(const StateKey& state) const { return depth_.at(vertex(state)); }

// ---------------------------------------------------------------------------

std::vector<StateKey> enumerate_states(const Domain& domain, std::size_t limit) {
  std::vector<StateKey> out;
  std::unordered_set<StateKey, StateKeyHash> seen;
  std::deque<StateKey> queue{domain.root()};
  seen.insert(domain.root());
  while (!queue.empty()) {
    StateKey s = std::move(queue.front());
    queue.pop_front();
    for (auto& c : domain.children(s)) {
      if (seen.insert(c).second) queue.push_back(c);
    }
    out.push_back(std::move(s));
    if (out.size() > limit) throw InputError("domain too large to enumerate");
  }
  std::stable_sort(out.begin(), out.end(), [&](const StateKey& a, const StateKey& b) {
    return domain.depth(a) < domain.depth(b);
  });
  return out;
}

}  // namespace dagbandit
