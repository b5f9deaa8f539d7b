#include "longtail/partition.h"

#include <algorithm>

#include <fmt/format.h>

#include "longtail/errors.h"
#include "longtail/random.h"

namespace longtail {

std::vector<ViewId> ChoosePartitionSeeds(const ViewGraph& graph, int n_cc,
                                         std::uint64_t seed,
                                         const CommunityAssignment& communities) {
  if (n_cc < 1 || static_cast<std::size_t>(n_cc) > graph.NumNodes()) {
    throw InvalidArgument(fmt::format("InvalidNcc: n_cc = {} with {} nodes", n_cc,
                                      graph.NumNodes()));
  }
  Rng rng(seed);
  std::vector<ViewId> seeds;
  std::map<int, std::vector<ViewId>> by_community;
  for (ViewId id : graph.Nodes()) {
    auto it = communities.labels.find(id);
    by_community[it == communities.labels.end() ? -1 : it->second].push_back(id);
  }
  if (by_community.size() >= static_cast<std::size_t>(n_cc)) {
    std::vector<int> ids;
    for (const auto& [c, members] : by_community) ids.push_back(c);
    rng.Shuffle(std::span<int>(ids));
    for (int i = 0; i < n_cc; ++i) {
      const auto& members = by_community[ids[i]];
      seeds.push_back(members[rng.UniformIndex(members.size())]);
    }
  } else {
    std::vector<ViewId> pool = graph.Nodes();
    rng.Shuffle(std::span<ViewId>(pool));
    seeds.assign(pool.begin(), pool.begin() + n_cc);
  }
  return seeds;
}

Partitioning PartitionFromSeeds(const ViewGraph& graph,
                                const std::vector<ViewId>& seeds) {
  const std::size_t n_parts = seeds.size();
  Partitioning result;
  result.parts.resize(n_parts);
  result.seed_nodes = seeds;
  std::vector<int> owner(graph.NumNodes(), -1);
  std::vector<std::vector<std::uint32_t>> frontiers(n_parts);
  for (std::size_t i = 0; i < n_parts; ++i) {
    const auto s = graph.IndexOf(seeds[i]);
    if (owner[s] >= 0) throw InvalidArgument("partition seeds must be distinct");
    owner[s] = static_cast<int>(i);
    result.parts[i].push_back(seeds[i]);
    frontiers[i].push_back(s);
  }
  bool any_frontier = true;
  while (any_frontier) {
    any_frontier = false;
    for (std::size_t i = 0; i < n_parts; ++i) {
      std::vector<std::uint32_t> next;
      for (const auto u : frontiers[i]) {
        for (const Arc& arc : graph.Neighbors(u)) {
          if (owner[arc.target] < 0) {
            owner[arc.target] = static_cast<int>(i);
            result.parts[i].push_back(graph.NodeAt(arc.target));
            next.push_back(arc.target);
          }
        }
      }
      frontiers[i] = std::move(next);
      any_frontier = any_frontier || !frontiers[i].empty();
    }
  }
  for (std::uint32_t u = 0; u < graph.NumNodes(); ++u) {
    if (owner[u] >= 0) result.assignment.emplace(graph.NodeAt(u), owner[u]);
  }
  return result;
}

Partitioning PartitionRoundRobin(const ViewGraph& graph, int n_cc,
                                 std::uint64_t seed,
                                 const CommunityAssignment& communities) {
  return PartitionFromSeeds(graph,
                            ChoosePartitionSeeds(graph, n_cc, seed, communities));
}

}  // namespace longtail
