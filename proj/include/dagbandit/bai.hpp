#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dagbandit/oracle.hpp"
#include "dagbandit/rave.hpp"
#include "dagbandit/search_dag.hpp"

namespace dagbandit {

/// Leaves `a` and `b` denote the same position (always false across distinct
/// nodes of a DAG that merges transpositions).
bool same_leaf(const SearchDag& dag, NodeId a, NodeId b);

/// Children of `node` whose representative leaf differs from that of `a`.
std::vector<NodeId> bar_set(const SearchDag& dag, NodeId node, NodeId a);

/// LUCB choice at a node. `challenger` is empty when every child shares the
/// representative leaf of `best`; `chosen` is then `best`.
struct Selection {
  NodeId best;
  std::optional<NodeId> challenger;
  NodeId chosen;
  /// U(challenger) - L(best), or -infinity without a challenger.
  double gap;
};

/// b = argmax L, c = argmax U over bar_set(b), chosen = wider of the two.
/// Ties go to the lowest id. Throws StructuralError on a childless node.
Selection bai_select(const SearchDag& dag, NodeId node);

/// True iff U(c) - L(b) < epsilon or no challenger exists.
bool bai_stop(const SearchDag& dag, NodeId node, double epsilon);

/// argmax-L child, lowest id on ties.
NodeId bai_reco(const SearchDag& dag, NodeId node);

/// floor(t^b) computed exactly, with 0^b = 0. Requires 0 <= b <= 1.
std::uint64_t floor_pow(std::uint64_t t, double b);

/// floor((t+1)^b) - floor(t^b) == 1.
bool expand_due(std::uint64_t t, double b);

/// I_s = T_s / (|C(s)| + 1) / max(d(s), 1).
double expansion_index(std::uint64_t visits, std::size_t realized_children, int depth);

/// Picks one of `candidates` (unrealized children of `parent`); returns its index.
using ChildChooser =
    std::function<std::size_t(const SearchDag& dag, NodeId parent, const std::vector<StateKey>& candidates, Rng& rng)>;

ChildChooser uniform_chooser();
/// Highest RAVE score of the added move; ties broken uniformly at random.
/// `table` must outlive the chooser.
ChildChooser rave_chooser(const RaveTable& table);

/// Expands the node of maximal index among expandable nodes reachable from
/// `subroot` (lowest id on ties) with one child picked by `choose`.
/// Returns nothing when the sub-DAG is saturated.
std::optional<NodeId> bai_add(SearchDag& dag, NodeId subroot, const ChildChooser& choose, Rng& rng);

/// Queries the appropriate oracle at a temporary leaf and records the answer.
/// Deterministic terminal answers pin the leaf; repeat queries reuse the pinned value.
UpdateCount sample_leaf(SearchDag& dag, NodeId leaf, const OracleSpec& oracles, Rng& rng, Evaluation* out = nullptr);

struct BaiParams {
  double epsilon = 0.0;
  double b = 0.3;
  std::uint64_t max_steps = 100'000'000;
  std::uint64_t seed = 0;
};

struct BaiReport {
  NodeId recommended = 0;
  StateKey recommendation;
  std::uint64_t samples = 0;
  std::uint64_t node_updates = 0;       // early-cutoff recomputations
  std::uint64_t node_updates_full = 0;  // leaf plus every ancestor, per sample
  std::uint64_t expansions = 0;
  std::size_t leaf_count_final = 0;
  std::size_t explored_leaf_count = 0;
  bool stopped = false;
  double wall_time = 0.0;
};

/// State after one completed step.
struct StepInfo {
  std::uint64_t t;  // steps completed
  NodeId frontier;  // node whose children were compared
  NodeId selected;
  NodeId leaf;
  const Evaluation* evaluation;
};

using StepObserver = std::function<void(const SearchDag& dag, const StepInfo& step)>;

/// LUCB over the root's children of a DAG that grows by the floor(t^b) schedule.
/// `dag` holds D_0 on entry and D_tau on return.
BaiReport run_bai(SearchDag& dag, const OracleSpec& oracles, const BaiParams& params,
                  const ChildChooser& choose = uniform_chooser(), const StepObserver& observer = {});

}  // namespace dagbandit
