#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "longtail/community.h"
#include "longtail/view_graph.h"

namespace longtail {

struct Partitioning {
  // Each part lists its views in the order they were claimed (seed first).
  std::vector<std::vector<ViewId>> parts;
  std::vector<ViewId> seed_nodes;
  // Reachable views only; unreachable views are absent.
  std::map<ViewId, int> assignment;
};

// Chooses n_cc distinct seeds. With at least n_cc communities, one random
// member is drawn from each of n_cc randomly chosen communities; otherwise
// seeds are drawn uniformly without replacement.
std::vector<ViewId> ChoosePartitionSeeds(const ViewGraph& graph, int n_cc,
                                         std::uint64_t seed,
                                         const CommunityAssignment& communities);

// Round-robin BFS: in every round each part in order 0..n-1 expands its
// frontier by one full BFS layer, claiming the unassigned neighbors. Parts
// whose frontier dies stop while the others continue.
Partitioning PartitionFromSeeds(const ViewGraph& graph,
                                const std::vector<ViewId>& seeds);

// Throws InvalidArgument when n_cc < 1 or n_cc > node count.
Partitioning PartitionRoundRobin(const ViewGraph& graph, int n_cc,
                                 std::uint64_t seed,
                                 const CommunityAssignment& communities);

}  // namespace longtail
