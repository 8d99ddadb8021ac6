#include "dagbandit/bai.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "dagbandit/errors.hpp"

namespace dagbandit {

bool same_leaf(const SearchDag& dag, NodeId a, NodeId b) {
  if (a == b) return true;
  const Domain& domain = dag.domain();
  return !domain.merges_transpositions() && domain.position(dag.key(a)) == domain.position(dag.key(b));
}

std::vector<NodeId> bar_set(const SearchDag& dag, NodeId node, NodeId a) {
  const NodeId leaf_a = dag.representative_leaf(a);
  std::vector<NodeId> out;
  for (NodeId c : dag.children(node)) {
    if (!same_leaf(dag, dag.representative_leaf(c), leaf_a)) out.push_back(c);
  }
  return out;
}

NodeId bai_reco(const SearchDag& dag, NodeId node) {
  const auto kids = dag.children(node);
  if (kids.empty()) throw StructuralError("node has no children");
  NodeId best = kids.front();
  for (NodeId c : kids) {
    if (dag.bounds(c).lower > dag.bounds(best).lower) best = c;
  }
  return best;
}

Selection bai_select(const SearchDag& dag, NodeId node) {
  const NodeId best = bai_reco(dag, node);
  const NodeId best_leaf = dag.representative_leaf(best);
  std::optional<NodeId> challenger;
  for (NodeId c : dag.children(node)) {
    if (c == best || same_leaf(dag, dag.representative_leaf(c), best_leaf)) continue;
    if (!challenger || dag.bounds(c).upper > dag.bounds(*challenger).upper) challenger = c;
  }
  Selection sel{best, challenger, best, -std::numeric_limits<double>::infinity()};
  if (challenger) {
    sel.gap = dag.bounds(*challenger).upper - dag.bounds(best).lower;
    const double wb = dag.bounds(best).width();
    const double wc = dag.bounds(*challenger).width();
    if (wc > wb || (wc == wb && *challenger < best)) sel.chosen = *challenger;
  }
  return sel;
}

bool bai_stop(const SearchDag& dag, NodeId node, double epsilon) {
  const Selection sel = bai_select(dag, node);
  return !sel.challenger || sel.gap < epsilon;
}

namespace {

// b as p/q with q <= 1000, if b is such a fraction up to rounding.
std::optional<std::pair<unsigned, unsigned>> as_fraction(double b) {
  for (unsigned q = 1; q <= 1000; ++q) {
    const double p = std::round(b * q);
    if (std::abs(p / q - b) < 1e-12) return std::pair{static_cast<unsigned>(p), q};
  }
  return std::nullopt;
}

}  // namespace

std::uint64_t floor_pow(std::uint64_t t, double b) {
  if (!(b >= 0.0 && b <= 1.0)) throw InputError("expansion parameter must lie in [0,1]");
  if (t == 0) return 0;
  if (b == 0.0) return 1;
  const long double r = std::pow(static_cast<long double>(t), static_cast<long double>(b));
  const long double nearest = std::round(r);
  if (std::abs(r - nearest) > 1e-9L * r) return static_cast<std::uint64_t>(std::floor(r));

  // Close to an integer c: decide t^b >= c exactly via t^p >= c^q.
  const auto c = static_cast<std::uint64_t>(nearest);
  const auto frac = as_fraction(b);
  if (!frac) return static_cast<std::uint64_t>(std::floor(r));
  using boost::multiprecision::cpp_int;
  const cpp_int lhs = boost::multiprecision::pow(cpp_int(t), frac->first);
  const cpp_int rhs = boost::multiprecision::pow(cpp_int(c), frac->second);
  return lhs >= rhs ? c : c - 1;
}

bool expand_due(std::uint64_t t, double b) { return floor_pow(t + 1, b) - floor_pow(t, b) == 1; }

double expansion_index(std::uint64_t visits, std::size_t realized_children, int depth) {
  return static_cast<double>(visits) / static_cast<double>(realized_children + 1) /
         static_cast<double>(std::max(depth, 1));
}

ChildChooser uniform_chooser() {
  return [](const SearchDag&, NodeId, const std::vector<StateKey>& candidates, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return pick(rng);
  };
}

ChildChooser rave_chooser(const RaveTable& table) {
  return [&table](const SearchDag& dag, NodeId parent, const std::vector<StateKey>& candidates, Rng& rng) {
    const StateKey& from = dag.key(parent);
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t ties = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double s = table.score(from, dag.domain().added_move(from, candidates[i]));
      if (s > best_score) {
        best_score = s;
        best = i;
        ties = 1;
      } else if (s == best_score) {
        // reservoir pick among equal scores
        ++ties;
        std::uniform_int_distribution<std::size_t> pick(0, ties - 1);
        if (pick(rng) == 0) best = i;
      }
    }
    return best;
  };
}

std::optional<NodeId> bai_add(SearchDag& dag, NodeId subroot, const ChildChooser& choose, Rng& rng) {
  std::vector<std::uint8_t> seen(dag.size(), 0);
  std::vector<NodeId> stack{subroot};
  seen[subroot] = 1;
  std::optional<NodeId> target;
  double target_index = -1.0;
  std::vector<NodeId> reachable;
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    reachable.push_back(id);
    for (NodeId c : dag.children(id)) {
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  std::sort(reachable.begin(), reachable.end());
  for (NodeId id : reachable) {
    if (dag.is_terminal(id) || !dag.is_expandable(id)) continue;
    const double index = expansion_index(dag.stats(id).visits, dag.children(id).size(), dag.depth(id));
    if (index > target_index) {
      target_index = index;
      target = id;
    }
  }
  if (!target) return std::nullopt;
  const auto candidates = dag.unrealized_children(*target);
  const std::size_t pick = choose(dag, *target, candidates, rng);
  return dag.insert_node(candidates.at(pick));
}

UpdateCount sample_leaf(SearchDag& dag, NodeId leaf, const OracleSpec& oracles, Rng& rng, Evaluation* out) {
  const NodeStats& stats = dag.stats(leaf);
  if (stats.exact) {
    const double v = stats.mean;
    if (out) *out = Evaluation{v, dag.key(leaf)};
    return dag.record_exact(leaf, v);
  }
  const bool terminal = dag.is_terminal(leaf);
  Evaluation eval = terminal ? oracles.terminal(dag.key(leaf), rng) : oracles.intermediate(dag.key(leaf), rng);
  if (!(eval.value >= 0.0 && eval.value <= 1.0)) throw EvaluationError("oracle value outside [0,1]");
  const UpdateCount count = terminal && oracles.deterministic_terminal ? dag.record_exact(leaf, eval.value)
                                                                      : dag.record_sample(leaf, eval.value);
  if (out) *out = std::move(eval);
  return count;
}

BaiReport run_bai(SearchDag& dag, const OracleSpec& oracles, const BaiParams& params, const ChildChooser& choose,
                  const StepObserver& observer) {
  if (!(params.epsilon >= 0.0)) throw InputError("epsilon must be nonnegative");
  if (params.max_steps == 0) throw InputError("max_steps must be positive");
  if (dag.children(dag.root()).empty()) throw StructuralError("the root needs at least one child");
  const auto start = std::chrono::steady_clock::now();
  Rng rng(params.seed);
  dag.reset_explored_leaf_count();

  BaiReport report;
  bool saturated = false;
  Evaluation eval;
  std::uint64_t t = 0;
  for (;;) {
    Selection sel = bai_select(dag, dag.root());
    if (!sel.challenger || sel.gap < params.epsilon) {
      report.stopped = true;
      break;
    }
    if (t >= params.max_steps) break;
    if (!saturated && expand_due(t, params.b)) {
      if (bai_add(dag, dag.root(), choose, rng)) {
        ++report.expansions;
        sel = bai_select(dag, dag.root());
      } else {
        saturated = true;
      }
    }
    const NodeId leaf = dag.representative_leaf(sel.chosen);
    dag.add_visit(dag.root());
    for (NodeId cur = sel.chosen;; cur = *dag.stats(cur).rep_child) {
      dag.add_visit(cur);
      if (cur == leaf) break;
    }
    const UpdateCount count = sample_leaf(dag, leaf, oracles, rng, &eval);
    report.node_updates += count.recomputed;
    report.node_updates_full += count.full;
    ++t;
    if (observer) observer(dag, StepInfo{t, dag.root(), sel.chosen, leaf, &eval});
  }
  report.samples = t;
  report.recommended = bai_reco(dag, dag.root());
  report.recommendation = dag.key(report.recommended);
  report.leaf_count_final = dag.temp_leaf_count();
  report.explored_leaf_count = dag.explored_leaf_count();
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dagbandit
