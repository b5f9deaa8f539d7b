#include <cmath>

#include <gtest/gtest.h>

#include "longtail/community.h"
#include "longtail/errors.h"
#include "longtail/steiner.h"
#include "oracles.h"

namespace longtail {
namespace {

using testing::MakeGraph;

ViewGraph Star(int leaves) {
  std::vector<MatchEdge> edges;
  for (int i = 2; i <= leaves + 1; ++i) edges.push_back({1, ViewId(i), 100});
  return MakeGraph(leaves + 1, edges);
}

bool IsTree(const SteinerResult& r) {
  if (r.tree_edges.size() + 1 != r.tree_nodes.size()) return false;
  std::vector<MatchEdge> edges;
  for (auto [a, b] : r.tree_edges) edges.push_back({a, b, 1});
  const auto g = ViewGraph::FromEdges(r.tree_nodes, edges);
  return testing::ComponentSets(g).size() == 1;
}

TEST(Steiner, StarLeavesGoThroughHub) {
  const std::vector<ViewId> terminals = {2, 3, 4};
  const auto r = ApproximateSteinerTree(Star(5), terminals);
  EXPECT_EQ(r.tree_nodes, (std::vector<ViewId>{1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(r.total_weight, 3.0);
  EXPECT_TRUE(IsTree(r));
}

TEST(Steiner, SingleTerminal) {
  const std::vector<ViewId> terminals = {3};
  const auto r = ApproximateSteinerTree(Star(4), terminals);
  EXPECT_EQ(r.tree_nodes, terminals);
  EXPECT_TRUE(r.tree_edges.empty());
  EXPECT_EQ(r.total_weight, 0.0);
}

TEST(Steiner, DisconnectedTerminalsThrow) {
  const auto graph = MakeGraph(4, {{1, 2, 1}, {3, 4, 1}});
  const std::vector<ViewId> terminals = {1, 4};
  EXPECT_THROW(ApproximateSteinerTree(graph, terminals), DisconnectedTerminals);
}

TEST(Steiner, UnknownTerminalThrows) {
  const std::vector<ViewId> terminals = {1, 42};
  EXPECT_THROW(ApproximateSteinerTree(Star(3), terminals), UnknownNode);
}

TEST(Steiner, EdgeLengths) {
  EXPECT_EQ(EdgeLength(300, SteinerWeight::kUnitHop), 1.0);
  EXPECT_DOUBLE_EQ(EdgeLength(4, SteinerWeight::kInverseMatch), 0.25);
  EXPECT_TRUE(std::isinf(EdgeLength(0, SteinerWeight::kInverseMatch)));
}

TEST(Steiner, AllTerminalsGiveMst) {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const auto graph = testing::RandomConnectedGraph(rng, 9, 0.3);
    for (auto mode : {SteinerWeight::kUnitHop, SteinerWeight::kInverseMatch}) {
      const auto r = ApproximateSteinerTree(graph, graph.Nodes(), mode);
      EXPECT_NEAR(r.total_weight, *testing::MstWeight(graph, mode), 1e-12);
      EXPECT_TRUE(IsTree(r));
    }
  }
}

TEST(Steiner, WithinApproximationBound) {
  Rng rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    const auto graph = testing::RandomConnectedGraph(rng, 10, 0.2);
    std::vector<ViewId> nodes = graph.Nodes();
    rng.Shuffle(std::span<ViewId>(nodes));
    const std::size_t k = 2 + trial % 3;
    std::vector<ViewId> terminals(nodes.begin(), nodes.begin() + k);
    for (auto mode : {SteinerWeight::kUnitHop, SteinerWeight::kInverseMatch}) {
      const auto r = ApproximateSteinerTree(graph, terminals, mode);
      const double opt = testing::ExactSteinerWeight(graph, terminals, mode);
      EXPECT_LE(r.total_weight, 2.0 * (1.0 - 1.0 / k) * opt + 1e-9);
      EXPECT_GE(r.total_weight, opt - 1e-9);
      EXPECT_TRUE(IsTree(r));
      for (ViewId t : terminals) {
        EXPECT_TRUE(std::binary_search(r.tree_nodes.begin(), r.tree_nodes.end(), t));
      }
    }
  }
}

TEST(Steiner, LeavesAreTerminals) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto graph = testing::RandomConnectedGraph(rng, 30, 0.05);
    const std::vector<ViewId> terminals = {1, 10, 20, 30};
    const auto r = ApproximateSteinerTree(graph, terminals);
    std::map<ViewId, int> degree;
    for (auto [a, b] : r.tree_edges) ++degree[a], ++degree[b];
    for (auto [v, d] : degree) {
      if (d == 1) EXPECT_TRUE(std::count(terminals.begin(), terminals.end(), v));
    }
  }
}

TEST(SelectTerminals, OnePerCommunity) {
  const auto graph = testing::DisjointTriangles(3);
  const auto communities = Louvain(graph, 0);
  const auto& part = graph.Nodes();
  const auto terminals = SelectTerminals(part, communities, 4);
  ASSERT_EQ(terminals.size(), 3u);
  std::set<int> labels;
  for (ViewId t : terminals) labels.insert(communities.Label(t));
  EXPECT_EQ(labels.size(), 3u);
  EXPECT_EQ(terminals, SelectTerminals(part, communities, 4));
}

TEST(SelectTerminals, SingleCommunityPart) {
  const auto graph = testing::DisjointTriangles(3);
  const auto communities = Louvain(graph, 0);
  const std::vector<ViewId> part = {4, 5, 6};
  EXPECT_EQ(SelectTerminals(part, communities, 1).size(), 1u);
}

TEST(MaxTerminalSubtree, BudgetRespectedAndConnected) {
  // Path 1-2-3-4-5 with terminals at both ends and the middle.
  SteinerResult tree;
  tree.terminals = {1, 3, 5};
  tree.tree_nodes = {1, 2, 3, 4, 5};
  tree.tree_edges = {{1, 2}, {2, 3}, {3, 4}, {4, 5}};
  EXPECT_EQ(MaxTerminalSubtree(tree, 10), tree.tree_nodes);
  EXPECT_EQ(MaxTerminalSubtree(tree, 3), (std::vector<ViewId>{1, 2, 3}));
  EXPECT_EQ(MaxTerminalSubtree(tree, 2), (std::vector<ViewId>{1, 2}));
  EXPECT_EQ(MaxTerminalSubtree(tree, 1), (std::vector<ViewId>{1}));
  EXPECT_TRUE(MaxTerminalSubtree(tree, 0).empty());
}

}  // namespace
}  // namespace longtail
