#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "longtail/view_graph.h"

namespace longtail {

using CommunityLabels = std::map<ViewId, int>;

struct CommunityAssignment {
  // Dense ids 0..K-1, numbered in order of the smallest member view id.
  CommunityLabels labels;
  double modularity = 0.0;
  int level_count = 0;
  // Modularity of the original graph after each coarsening level.
  std::vector<double> level_modularity;

  int NumCommunities() const;
  int Label(ViewId view) const;
  std::vector<std::vector<ViewId>> Members() const;
};

struct LouvainOptions {
  double resolution = 1.0;
  // A level is kept only if it raises modularity by more than this.
  double min_gain = 1e-12;
};

// Weighted Newman-Girvan modularity,
//   Q = 1/(2m) sum_ij [A_ij - gamma k_i k_j / (2m)] delta(c_i, c_j).
// Throws EmptyGraph when the graph has no edges.
double Modularity(const ViewGraph& graph, const CommunityLabels& labels,
                  double resolution = 1.0);

// Multi-level Louvain with a seeded node visiting order. Deterministic given
// (graph, seed, options). Isolated nodes end up as singleton communities.
CommunityAssignment Louvain(const ViewGraph& graph, std::uint64_t seed,
                            const LouvainOptions& options = {});

// Renumbers labels to dense ids ordered by smallest member id.
CommunityLabels NormalizeLabels(const CommunityLabels& labels);

}  // namespace longtail
