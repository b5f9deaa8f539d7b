#include <gtest/gtest.h>

#include "longtail/community.h"
#include "longtail/errors.h"
#include "longtail/synth.h"
#include "oracles.h"

namespace longtail {
namespace {

using testing::BruteForceBestPartition;
using testing::MakeGraph;
using testing::ModularityOracle;

CommunityLabels AllIn(const ViewGraph& graph, int label = 0) {
  CommunityLabels labels;
  for (ViewId v : graph.Nodes()) labels[v] = label;
  return labels;
}

CommunityLabels Singletons(const ViewGraph& graph) {
  CommunityLabels labels;
  int c = 0;
  for (ViewId v : graph.Nodes()) labels[v] = c++;
  return labels;
}

TEST(Modularity, TriangleSingleCommunityIsZero) {
  const auto graph = testing::DisjointTriangles(1);
  EXPECT_NEAR(Modularity(graph, AllIn(graph)), 0.0, 1e-15);
}

TEST(Modularity, TriangleSingletonsNegative) {
  const auto graph = testing::DisjointTriangles(1);
  const double q = Modularity(graph, Singletons(graph));
  EXPECT_LT(q, 0.0);
  EXPECT_NEAR(q, -1.0 / 3.0, 1e-12);
}

TEST(Modularity, CliquesBridgeMatchesOracle) {
  const auto graph = testing::TwoCliquesBridge(4);
  CommunityLabels labels;
  for (ViewId v = 1; v <= 8; ++v) labels[v] = v <= 4 ? 0 : 1;
  EXPECT_NEAR(Modularity(graph, labels), ModularityOracle(graph, labels), 1e-12);
  // 13 edges: 6 internal per clique, degree sum 13 per side.
  EXPECT_NEAR(Modularity(graph, labels), 12.0 / 13.0 - 0.5, 1e-12);
}

TEST(Modularity, RandomLabelingsMatchOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto graph = testing::RandomConnectedGraph(rng, 12, 0.2);
    CommunityLabels labels;
    for (ViewId v : graph.Nodes()) labels[v] = static_cast<int>(rng.UniformIndex(4));
    EXPECT_NEAR(Modularity(graph, labels), ModularityOracle(graph, labels), 1e-12);
  }
}

TEST(Modularity, EdgelessGraphThrows) {
  const auto graph = MakeGraph(3, {});
  EXPECT_THROW(Modularity(graph, AllIn(graph)), EmptyGraph);
}

TEST(Modularity, ZeroWeightEdgesOnlyThrows) {
  const auto graph = MakeGraph(2, {{1, 2, 0}});
  EXPECT_THROW(Modularity(graph, AllIn(graph)), EmptyGraph);
  EXPECT_EQ(Louvain(graph, 0).NumCommunities(), 2);
}

TEST(Louvain, TwoCliquesSplitAtBridge) {
  const auto graph = testing::TwoCliquesBridge(4);
  const auto result = Louvain(graph, 0);
  EXPECT_EQ(result.NumCommunities(), 2);
  for (ViewId v = 1; v <= 8; ++v) EXPECT_EQ(result.Label(v), v <= 4 ? 0 : 1);
  EXPECT_EQ(result.labels, NormalizeLabels(BruteForceBestPartition(graph)));
}

TEST(Louvain, DisjointTrianglesMatchBruteForce) {
  const auto graph = testing::DisjointTriangles(3);
  double best_q = 0.0;
  const auto best = NormalizeLabels(BruteForceBestPartition(graph, &best_q));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto result = Louvain(graph, seed);
    EXPECT_EQ(result.labels, best);
    EXPECT_NEAR(result.modularity, best_q, 1e-12);
  }
}

TEST(Louvain, SingleNode) {
  const auto result = Louvain(MakeGraph(1, {}), 3);
  EXPECT_EQ(result.labels, (CommunityLabels{{1, 0}}));
  EXPECT_EQ(result.level_count, 0);
}

TEST(Louvain, IsolatedNodesAreSingletons) {
  const auto result = Louvain(MakeGraph(5, {{1, 2, 9}, {2, 3, 9}, {1, 3, 9}}), 1);
  EXPECT_EQ(result.Label(4), 1);
  EXPECT_EQ(result.Label(5), 2);
  EXPECT_EQ(result.Label(1), 0);
}

TEST(Louvain, LabelsDenseAndOrderedBySmallestMember) {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto graph = testing::RandomGraph(rng, 30, 0.1);
    const auto result = Louvain(graph, trial);
    int next = 0;
    for (const auto& [view, label] : result.labels) {
      ASSERT_LE(label, next);
      if (label == next) ++next;
    }
    EXPECT_EQ(next, result.NumCommunities());
  }
}

TEST(Louvain, DeterministicPerSeed) {
  Rng rng(5);
  const auto graph = testing::RandomConnectedGraph(rng, 40, 0.1);
  const auto a = Louvain(graph, 17);
  const auto b = Louvain(graph, 17);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.level_modularity, b.level_modularity);
}

TEST(Louvain, LevelModularityNonDecreasingAndReported) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto graph = testing::RandomConnectedGraph(rng, 25, 0.08);
    const auto result = Louvain(graph, trial);
    for (std::size_t i = 1; i < result.level_modularity.size(); ++i) {
      EXPECT_GE(result.level_modularity[i], result.level_modularity[i - 1]);
    }
    EXPECT_NEAR(result.modularity, Modularity(graph, result.labels), 1e-9);
    EXPECT_GE(result.modularity, Modularity(graph, Singletons(graph)) - 1e-12);
  }
}

TEST(Louvain, NeverWorseThanBruteForceOnSmallGraphsByMuch) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto graph = testing::RandomConnectedGraph(rng, 7, 0.3);
    double best_q = 0.0;
    BruteForceBestPartition(graph, &best_q);
    const auto result = Louvain(graph, trial);
    EXPECT_LE(result.modularity, best_q + 1e-12);
  }
}

TEST(Louvain, RecoversRingClusters) {
  SynthSpec spec;
  spec.cluster_count = 8;
  spec.cluster_size = 6;
  const auto gen = GenerateRingScene(spec);
  const auto graph = BuildGraph(gen.scene);
  const auto result = Louvain(graph, 2);
  EXPECT_EQ(result.NumCommunities(), spec.cluster_count);
  EXPECT_EQ(result.labels, NormalizeLabels(gen.clusters));
}

TEST(NormalizeLabels, OrdersBySmallestMember) {
  const CommunityLabels raw = {{1, 7}, {2, 3}, {3, 7}, {4, 9}};
  EXPECT_EQ(NormalizeLabels(raw), (CommunityLabels{{1, 0}, {2, 1}, {3, 0}, {4, 2}}));
}

}  // namespace
}  // namespace longtail
