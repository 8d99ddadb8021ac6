#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dagbandit/bai.hpp"
#include "dagbandit/oracle.hpp"
#include "dagbandit/rave.hpp"
#include "dagbandit/search_dag.hpp"

namespace dagbandit {

/// Nodes visited by bli_select from `node`: each solved node is followed by
/// its recommendation. The last entry is unsolved, childless, or terminal.
std::vector<NodeId> bli_chain(const SearchDag& dag, NodeId node, double epsilon);

/// Last node of bli_chain.
NodeId bli_select(const SearchDag& dag, NodeId node, double epsilon);

/// True iff the node is a terminal leaf of the domain.
bool bli_stop(const SearchDag& dag, NodeId node);

struct BliParams {
  double epsilon = 0.005;
  double b = 0.3;
  std::uint64_t max_steps = 100'000'000;
  std::uint64_t seed = 0;
  /// Features added two levels deep below each newly reached frontier (0 = off).
  std::size_t init_width = 7;
};

struct BliReport {
  NodeId leaf = 0;
  StateKey recommendation;
  double value_estimate = 0.0;
  std::size_t n_features = 0;
  std::uint64_t samples = 0;
  std::uint64_t node_updates = 0;
  std::uint64_t node_updates_full = 0;
  std::uint64_t expansions = 0;
  std::size_t stages = 0;  // distinct frontiers
  std::size_t leaf_count_final = 0;
  bool stopped = false;
  double wall_time = 0.0;
};

/// Stagewise best-leaf identification. With a RAVE table, new children are
/// chosen by RAVE score and every oracle answer is recorded into the table;
/// without one, children are chosen uniformly.
BliReport run_bli(SearchDag& dag, const OracleSpec& oracles, const BliParams& params, RaveTable* rave = nullptr,
                  const StepObserver& observer = {});

}  // namespace dagbandit
