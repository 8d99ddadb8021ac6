#include "dagbandit/bli.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "dagbandit/errors.hpp"

namespace dagbandit {

std::vector<NodeId> bli_chain(const SearchDag& dag, NodeId node, double epsilon) {
  std::vector<NodeId> chain{node};
  while (!dag.children(node).empty() && bai_stop(dag, node, epsilon)) {
    node = bai_reco(dag, node);
    chain.push_back(node);
  }
  return chain;
}

NodeId bli_select(const SearchDag& dag, NodeId node, double epsilon) {
  return bli_chain(dag, node, epsilon).back();
}

bool bli_stop(const SearchDag& dag, NodeId node) { return dag.is_terminal(node); }

namespace {

class BliRun {
 public:
  BliRun(SearchDag& dag, const OracleSpec& oracles, const BliParams& params, RaveTable* rave)
      : dag_(dag), oracles_(oracles), params_(params), rave_(rave), rng_(params.seed),
        choose_(rave ? rave_chooser(*rave) : uniform_chooser()) {
    if (rave_) {
      for (NodeId id = 0; id < dag_.size(); ++id) track(id);
    }
  }

  BliReport run(const StepObserver& observer);

 private:
  void track(NodeId id) {
    if (rave_ && !dag_.is_terminal(id)) rave_->track(dag_.key(id));
  }

  std::optional<NodeId> insert(const StateKey& key) {
    if (dag_.contains(key)) return std::nullopt;
    const NodeId id = dag_.insert_node(key);
    track(id);
    return id;
  }

  bool expand_under(NodeId subroot) {
    const auto id = bai_add(dag_, subroot, choose_, rng_);
    if (!id) return false;
    track(*id);
    ++report_.expansions;
    return true;
  }

  std::vector<Feature> top_features(NodeId node);
  // Returns true if the node was not initialized before.
  bool initialize(NodeId node);
  // Initializes every chain node below the root; true if any was new.
  bool initialize_chain(const std::vector<NodeId>& chain) {
    bool any = false;
    for (std::size_t i = 1; i < chain.size(); ++i) any = initialize(chain[i]) || any;
    return any;
  }

  SearchDag& dag_;
  const OracleSpec& oracles_;
  const BliParams& params_;
  RaveTable* rave_;
  Rng rng_;
  ChildChooser choose_;
  BliReport report_;
  std::unordered_map<NodeId, std::uint64_t> clock_;
  std::vector<std::uint8_t> initialized_;
};

std::vector<Feature> BliRun::top_features(NodeId node) {
  const StateKey& key = dag_.key(node);
  const Domain& domain = dag_.domain();
  std::vector<std::pair<double, Feature>> ranked;
  for (const StateKey& c : domain.children(key)) {
    const Feature f = domain.added_move(key, c);
    if (f == domain.stop_move()) continue;
    ranked.emplace_back(rave_ ? rave_->score(key, f) : 0.0, f);
  }
  // Random order first so that equal scores are broken at random.
  std::shuffle(ranked.begin(), ranked.end(), rng_);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Feature> out;
  for (std::size_t i = 0; i < ranked.size() && i < params_.init_width; ++i) out.push_back(ranked[i].second);
  return out;
}

bool BliRun::initialize(NodeId node) {
  if (initialized_.size() < dag_.size()) initialized_.resize(dag_.size(), 0);
  if (initialized_[node]) return false;
  initialized_[node] = 1;
  if (params_.init_width == 0 || dag_.is_terminal(node)) return false;

  const Domain& domain = dag_.domain();
  const StateKey base = dag_.key(node);
  const auto top = top_features(node);
  // Level one: the chosen moves plus the stopping move when the domain has one.
  std::vector<StateKey> level_one;
  for (const StateKey& c : domain.children(base)) {
    const Feature f = domain.added_move(base, c);
    if (f == domain.stop_move() || std::find(top.begin(), top.end(), f) != top.end()) {
      insert(c);
      if (!domain.is_terminal(c)) level_one.push_back(c);
    }
  }
  for (const StateKey& mid : level_one) {
    for (const StateKey& c : domain.children(mid)) {
      const Feature f = domain.added_move(mid, c);
      if (f == domain.stop_move() || std::find(top.begin(), top.end(), f) != top.end()) insert(c);
    }
  }
  return true;
}

BliReport BliRun::run(const StepObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  initialized_.assign(dag_.size(), 0);
  initialized_[dag_.root()] = 1;
  Evaluation eval;
  std::uint64_t t = 0;
  NodeId frontier = dag_.root();
  for (;;) {
    auto chain = bli_chain(dag_, dag_.root(), params_.epsilon);
    while (initialize_chain(chain)) chain = bli_chain(dag_, dag_.root(), params_.epsilon);
    frontier = chain.back();
    if (bli_stop(dag_, frontier) && dag_.stats(frontier).n_samples > 0) {
      report_.stopped = true;
      break;
    }
    if (t >= params_.max_steps) break;
    if (bli_stop(dag_, frontier)) {
      // Reached through single-child stages without ever being sampled.
      const UpdateCount count = sample_leaf(dag_, frontier, oracles_, rng_, &eval);
      if (rave_) rave_->record(eval.evaluated, eval.value);
      report_.node_updates += count.recomputed;
      report_.node_updates_full += count.full;
      ++t;
      if (observer) observer(dag_, StepInfo{t, frontier, frontier, frontier, &eval});
      continue;
    }

    if (clock_.try_emplace(frontier, 0).second) ++report_.stages;
    const std::uint64_t local_t = clock_[frontier];
    if (dag_.children(frontier).empty() || expand_due(local_t, params_.b)) {
      expand_under(frontier);
      chain = bli_chain(dag_, dag_.root(), params_.epsilon);
      if (chain.back() != frontier) {
        frontier = chain.back();
        if (bli_stop(dag_, frontier)) continue;
        clock_.try_emplace(frontier, 0);
        if (dag_.children(frontier).empty()) expand_under(frontier);
      }
    }
    if (dag_.children(frontier).empty()) throw StructuralError("frontier cannot be expanded");

    const Selection sel = bai_select(dag_, frontier);
    const NodeId leaf = dag_.representative_leaf(sel.chosen);
    for (NodeId id : chain) dag_.add_visit(id);
    for (NodeId cur = sel.chosen;; cur = *dag_.stats(cur).rep_child) {
      dag_.add_visit(cur);
      if (cur == leaf) break;
    }
    const UpdateCount count = sample_leaf(dag_, leaf, oracles_, rng_, &eval);
    if (rave_) rave_->record(eval.evaluated, eval.value);
    report_.node_updates += count.recomputed;
    report_.node_updates_full += count.full;
    ++t;
    ++clock_[frontier];
    if (observer) observer(dag_, StepInfo{t, frontier, sel.chosen, leaf, &eval});
  }
  report_.samples = t;
  report_.leaf = frontier;
  report_.recommendation = dag_.key(frontier);
  report_.value_estimate = dag_.stats(frontier).mean;
  report_.n_features = dag_.key(frontier).items.size();
  report_.leaf_count_final = dag_.temp_leaf_count();
  report_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report_;
}

}  // namespace

BliReport run_bli(SearchDag& dag, const OracleSpec& oracles, const BliParams& params, RaveTable* rave,
                  const StepObserver& observer) {
  if (!(params.epsilon >= 0.0)) throw InputError("epsilon must be nonnegative");
  if (params.max_steps == 0) throw InputError("max_steps must be positive");
  BliRun run(dag, oracles, params, rave);
  return run.run(observer);
}

}  // namespace dagbandit
