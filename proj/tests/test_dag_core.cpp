#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "dagbandit/domain.hpp"
#include "dagbandit/errors.hpp"
#include "dagbandit/harness.hpp"
#include "dagbandit/search_dag.hpp"
#include "reference_oracles.hpp"

namespace dagbandit {
namespace {

StateKey set_of(std::initializer_list<Feature> fs, bool stop = false) {
  StateKey k{fs, stop};
  std::sort(k.items.begin(), k.items.end());
  return k;
}

TEST(StateKey, TextRoundTrip) {
  for (const auto& k : {StateKey{}, set_of({0, 4}), set_of({2}, true), StateKey{{}, true}}) {
    EXPECT_EQ(parse_state_key(to_string(k)), k);
  }
  EXPECT_EQ(to_string(set_of({0, 4})), "{0,4}");
  EXPECT_EQ(to_string(set_of({2}, true)), "{2,stop}");
}

TEST(StateKey, TranspositionsEqualInSetMode) {
  StateKey a = with_feature_sorted(with_feature_sorted({}, 3), 1);
  StateKey b = with_feature_sorted(with_feature_sorted({}, 1), 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(StateKeyHash{}(a), StateKeyHash{}(b));
  StateKey c = with_move_appended(with_move_appended({}, 3), 1);
  StateKey d = with_move_appended(with_move_appended({}, 1), 3);
  EXPECT_NE(c, d);
}

TEST(Depth, CountsMovesIncludingStop) {
  FeatureLattice lattice(4);
  EXPECT_EQ(lattice.depth({}), 0);
  EXPECT_EQ(lattice.depth(set_of({0, 2})), 2);
  EXPECT_EQ(lattice.depth(set_of({0}, true)), 2);
}

TEST(InsertNode, SingleParent) {
  FeatureLattice lattice(3);
  SearchDag dag(lattice, ExplorationFn::practical(0.1));
  NodeId id = dag.insert_node(set_of({0}));
  EXPECT_EQ(dag.parents(id).size(), 1u);
  EXPECT_EQ(dag.parents(id)[0], dag.root());
}

TEST(InsertNode, TwoParentsInLattice) {
  FeatureLattice lattice(3);
  SearchDag dag(lattice, ExplorationFn::practical(0.1));
  dag.insert_node(set_of({0}));
  dag.insert_node(set_of({1}));
  NodeId id = dag.insert_node(set_of({0, 1}));
  EXPECT_EQ(dag.parents(id).size(), 2u);
}

TEST(InsertNode, RejectsDuplicatesAndOrphans) {
  FeatureLattice lattice(3);
  SearchDag dag(lattice, ExplorationFn::practical(0.1));
  dag.insert_node(set_of({0}));
  EXPECT_THROW(dag.insert_node(set_of({0})), DuplicateStateError);
  EXPECT_THROW(dag.insert_node(set_of({1, 2})), StructuralError);
}

TEST(InsertNode, LeafSetTracksChildren) {
  FeatureLattice lattice(3);
  SearchDag dag(lattice, ExplorationFn::practical(0.1));
  EXPECT_EQ(dag.temp_leaf_count(), 1u);
  dag.insert_node(set_of({0}));
  dag.insert_node(set_of({1}));
  EXPECT_EQ(dag.temp_leaf_count(), 2u);
  EXPECT_FALSE(dag.is_temp_leaf(dag.root()));
  EXPECT_TRUE(dag.is_expandable(dag.root()));
}

TEST(InsertNode, ChildReachedThroughOtherParentIsNotExpandable) {
  FeatureLattice lattice(2);
  SearchDag dag(lattice, ExplorationFn::practical(0.1));
  dag.insert_node(set_of({0}));
  dag.insert_node(set_of({0, 1}));
  NodeId one = dag.insert_node(set_of({1}));
  // {1} has children {0,1} (present, unlinked) and {1,stop}.
  EXPECT_TRUE(dag.is_temp_leaf(one));
  EXPECT_TRUE(dag.is_expandable(one));
  dag.insert_node(set_of({1}, true));
  EXPECT_FALSE(dag.is_expandable(one));
  EXPECT_EQ(dag.children(one).size(), 1u);
}

TEST(RepresentativeLeaf, BaseAndForcedPath) {
  ExplicitDag chain(3, {{0, 1}, {1, 2}});
  SearchDag dag(chain, ExplorationFn::practical(0.1));
  build_full(dag);
  EXPECT_EQ(dag.representative_leaf(2), 2u);
  EXPECT_EQ(dag.representative_leaf(dag.root()), 2u);
}

TEST(RepresentativeLeaf, FollowsLargestUpperBound) {
  // root -> A -> lA, root -> B. Pin A's leaf at 0.6 and B at 0.4.
  ExplicitDag g(4, {{0, 1}, {0, 2}, {1, 3}});
  SearchDag dag(g, ExplorationFn::practical(0.1));
  build_full(dag);
  dag.record_exact(3, 0.6);
  dag.record_exact(2, 0.4);
  EXPECT_DOUBLE_EQ(dag.bounds(1).upper, 0.6);
  EXPECT_EQ(dag.representative_leaf(dag.root()), 3u);
  EXPECT_EQ(dag.representative_leaf(dag.representative_leaf(dag.root())), 3u);
}

TEST(RecordSample, TwoNodeUpdate) {
  ExplicitDag g(2, {{0, 1}});
  SearchDag dag(g, ExplorationFn::practical(0.1));
  build_full(dag);
  UpdateCount c = dag.record_sample(1, 1.0);
  EXPECT_EQ(c.recomputed, 2u);
  EXPECT_EQ(c.full, 2u);
  EXPECT_DOUBLE_EQ(dag.stats(1).mean, 1.0);
  EXPECT_EQ(dag.stats(1).n_samples, 1u);
}

TEST(RecordSample, RunningMean) {
  ExplicitDag g(2, {{0, 1}});
  SearchDag dag(g, ExplorationFn::practical(0.1));
  build_full(dag);
  for (double x : {1.0, 0.0, 1.0}) dag.record_sample(1, x);
  EXPECT_NEAR(dag.stats(1).mean, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(dag.stats(1).n_samples, 3u);
}

std::size_t ancestors_by_traversal(const SearchDag& dag, NodeId leaf) {
  std::set<NodeId> seen;
  std::vector<NodeId> stack{leaf};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId p : dag.parents(v)) {
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  return seen.size();
}

TEST(RecordSample, FullCountReachesEveryAncestor) {
  FixedDepthLattice lattice(3, 3);
  SearchDag dag(lattice, ExplorationFn::practical(0.1));
  build_full(dag);
  NodeId leaf = *dag.find(set_of({0, 1, 2}));
  const std::size_t expected = 1 + ancestors_by_traversal(dag, leaf);
  EXPECT_EQ(expected, 8u);
  UpdateCount c = dag.record_sample(leaf, 0.5);
  EXPECT_EQ(c.full, expected);
  EXPECT_EQ(c.recomputed, expected);
}

TEST(Domains, TranspositionSharing) {
  FixedDepthLattice lattice(6, 3);
  SearchDag d(lattice, ExplorationFn::practical(0.1));
  build_full(d);
  FixedDepthTree tree(6, 3);
  SearchDag t(tree, ExplorationFn::practical(0.1));
  build_full(t);
  EXPECT_EQ(d.temp_leaf_count(), 20u);
  EXPECT_EQ(t.temp_leaf_count(), 120u);
  EXPECT_EQ(d.size(), 1u + 6 + 15 + 20);
  EXPECT_EQ(t.size(), 1u + 6 + 30 + 120);
}

TEST(Dump, EdgesAndStats) {
  ExplicitDag g(3, {{0, 1}, {0, 2}});
  SearchDag dag(g, ExplorationFn::practical(0.1));
  build_full(dag);
  std::ostringstream edges;
  dag.write_edges(edges);
  EXPECT_EQ(edges.str(), "{0}\t{1}\n{0}\t{2}\n");
  std::ostringstream stats;
  dag.write_stats(stats);
  const std::string text = stats.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

void expect_fixpoint(const SearchDag& dag) {
  const reference::Recomputed r = reference::recompute_all(dag);
  for (NodeId id = 0; id < dag.size(); ++id) {
    ASSERT_EQ(dag.bounds(id), r.bounds[id]) << "node " << id;
    ASSERT_EQ(dag.stats(id).rep_child, r.rep[id]) << "node " << id;
    ASSERT_LE(dag.bounds(id).lower, dag.bounds(id).upper);
  }
}

class FixpointProperty : public ::testing::TestWithParam<ExplorationFn::Kind> {};

TEST_P(FixpointProperty, RandomDagsFullyBuilt) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 100)(rng);
    ExplicitDag g = reference::random_dag(n, rng);
    SearchDag dag(g, ExplorationFn(GetParam(), 0.1));
    build_full(dag);
    std::vector<NodeId> leaves;
    for (NodeId id = 0; id < dag.size(); ++id) {
      if (dag.is_temp_leaf(id)) leaves.push_back(id);
    }
    for (int step = 0; step < 300; ++step) {
      NodeId leaf = leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
      if (dag.stats(leaf).exact) continue;
      if (step % 37 == 0) {
        dag.record_exact(leaf, std::uniform_real_distribution<double>(0, 1)(rng));
      } else {
        dag.record_sample(leaf, std::bernoulli_distribution(0.4)(rng) ? 1.0 : 0.0);
      }
      expect_fixpoint(dag);
      if (HasFatalFailure()) return;
    }
  }
}

TEST_P(FixpointProperty, RandomDagsGrownIncrementally) {
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 100)(rng);
    ExplicitDag g = reference::random_dag(n, rng);
    SearchDag dag(g, ExplorationFn(GetParam(), 0.1));
    for (int step = 0; step < 400; ++step) {
      if (step % 3 == 0) {
        std::vector<StateKey> frontier;
        for (NodeId id = 0; id < dag.size(); ++id) {
          for (auto& s : dag.unrealized_children(id)) frontier.push_back(s);
        }
        if (!frontier.empty()) {
          dag.insert_node(frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)]);
          expect_fixpoint(dag);
          if (HasFatalFailure()) return;
        }
      }
      std::vector<NodeId> leaves;
      for (NodeId id = 0; id < dag.size(); ++id) {
        if (dag.is_temp_leaf(id)) leaves.push_back(id);
      }
      NodeId leaf = leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
      dag.record_sample(leaf, std::uniform_real_distribution<double>(0, 1)(rng));
      expect_fixpoint(dag);
      if (HasFatalFailure()) return;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Beta, FixpointProperty,
                         ::testing::Values(ExplorationFn::Kind::kPractical, ExplorationFn::Kind::kTheory));

TEST(SearchDag, AcyclicUnderRandomInsertions) {
  Rng rng(5);
  FeatureLattice lattice(5);
  SearchDag dag(lattice, ExplorationFn::practical(0.1));
  for (int i = 0; i < 200; ++i) {
    std::vector<StateKey> frontier;
    for (NodeId id = 0; id < dag.size(); ++id) {
      for (auto& s : dag.unrealized_children(id)) frontier.push_back(s);
    }
    if (frontier.empty()) break;
    dag.insert_node(frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)]);
  }
  for (NodeId id = 0; id < dag.size(); ++id) {
    for (NodeId c : dag.children(id)) EXPECT_LT(id, c);
    EXPECT_EQ(dag.parents(id).empty(), id == dag.root());
  }
}

}  // namespace
}  // namespace dagbandit
