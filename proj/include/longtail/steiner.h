#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "longtail/community.h"
#include "longtail/view_graph.h"

namespace longtail {

enum class SteinerWeight {
  kUnitHop,       // every edge has length 1
  kInverseMatch,  // length 1 / match_count
};

std::string_view SteinerWeightName(SteinerWeight mode);
SteinerWeight SteinerWeightFromName(std::string_view name);

struct SteinerResult {
  std::vector<ViewId> terminals;   // sorted
  std::vector<ViewId> tree_nodes;  // sorted, superset of terminals
  std::vector<std::pair<ViewId, ViewId>> tree_edges;  // (a < b), sorted
  double total_weight = 0.0;
};

double EdgeLength(MatchCount weight, SteinerWeight mode);

// One seeded-random member per community that intersects `part`, in order of
// community id.
std::vector<ViewId> SelectTerminals(std::span<const ViewId> part,
                                    const CommunityAssignment& communities,
                                    std::uint64_t seed);

// Mehlhorn's 2(1 - 1/|T|) approximation: Voronoi regions from a
// multi-source Dijkstra, MST of the induced terminal distance graph,
// expansion into graph paths, MST of the expansion and removal of
// non-terminal leaves. Shortest-path ties go to the smallest predecessor id.
// Throws DisconnectedTerminals if the terminals span several components.
SteinerResult ApproximateSteinerTree(const ViewGraph& graph,
                                     std::span<const ViewId> terminals,
                                     SteinerWeight mode = SteinerWeight::kUnitHop);

// Connected subtree of exactly min(budget, tree size) nodes that keeps as many
// terminals as possible; ties prefer the smallest sum of node ids. Returns
// sorted ids.
std::vector<ViewId> MaxTerminalSubtree(const SteinerResult& tree,
                                       std::size_t budget);

}  // namespace longtail
