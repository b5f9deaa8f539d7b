#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "longtail/scene.h"

namespace longtail {

// Neighbor entry in index space. Node indices follow ascending view id, so
// sorting by index is sorting by id.
struct Arc {
  std::uint32_t target = 0;
  MatchCount weight = 0;
};

// Undirected weighted covisibility graph. Immutable once built.
class ViewGraph {
 public:
  ViewGraph() = default;

  // `nodes` may be unsorted and may contain views without edges. Throws
  // UnknownNode if an edge references a view outside `nodes`.
  static ViewGraph FromEdges(std::vector<ViewId> nodes,
                             const std::vector<MatchEdge>& edges);

  std::size_t NumNodes() const { return nodes_.size(); }
  std::size_t NumEdges() const { return num_edges_; }
  MatchCount PruneThreshold() const { return prune_threshold_; }

  const std::vector<ViewId>& Nodes() const { return nodes_; }
  ViewId NodeAt(std::uint32_t index) const { return nodes_[index]; }
  bool HasNode(ViewId id) const { return index_.contains(id); }
  std::optional<std::uint32_t> FindIndex(ViewId id) const;
  // Throws UnknownNode.
  std::uint32_t IndexOf(ViewId id) const;

  std::span<const Arc> Neighbors(std::uint32_t index) const {
    return adjacency_[index];
  }
  std::size_t Degree(std::uint32_t index) const {
    return adjacency_[index].size();
  }

  // Edge list with view_a < view_b, sorted.
  std::vector<MatchEdge> Edges() const;

  // Subgraph induced on `nodes` (ids not in the graph throw UnknownNode).
  ViewGraph InducedSubgraph(std::span<const ViewId> nodes) const;

  // Copy keeping only edges with weight >= threshold.
  ViewGraph Pruned(MatchCount threshold) const;

 private:
  std::vector<ViewId> nodes_;
  std::unordered_map<ViewId, std::uint32_t> index_;
  std::vector<std::vector<Arc>> adjacency_;
  std::size_t num_edges_ = 0;
  MatchCount prune_threshold_ = 0;
};

inline constexpr MatchCount kDefaultPruneThreshold = 50;

ViewGraph BuildGraph(const SceneReconstruction& scene);
ViewGraph PruneEdges(const ViewGraph& graph, MatchCount threshold);

struct GraphStatsReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  MatchCount prune_threshold = 0;
  std::map<std::size_t, std::size_t> degree_histogram;
  std::map<int, double> frac_degree_le;
  // Absent on edgeless graphs.
  std::optional<double> mean_match_count;
  // Descending.
  std::vector<std::size_t> connected_component_sizes;
};

GraphStatsReport ComputeStats(const ViewGraph& graph);
std::string FormatStatsReport(const GraphStatsReport& report);

// Components as sorted id lists, ordered by their smallest member.
std::vector<std::vector<ViewId>> ConnectedComponents(const ViewGraph& graph);

// Hop distances from a set of sources; unreachable nodes get -1.
std::vector<int> MultiSourceBfs(const ViewGraph& graph,
                                std::span<const std::uint32_t> sources,
                                int max_depth = -1);

// Number of connected components of the subgraph induced on `nodes`.
std::size_t CountInducedComponents(const ViewGraph& graph,
                                   std::span<const ViewId> nodes);

}  // namespace longtail
