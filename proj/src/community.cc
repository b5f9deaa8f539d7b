#include "longtail/community.h"

#include <algorithm>
#include <numeric>

#include "longtail/errors.h"
#include "longtail/random.h"

namespace longtail {
namespace {

// Weighted graph on dense indices used inside the coarsening levels. Self
// loops store A_ii, i.e. twice the internal edge weight of a merged node.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double total_weight = 0.0;  // 2m

  std::size_t size() const { return adjacency.size(); }
};

LevelGraph FromViewGraph(const ViewGraph& graph) {
  LevelGraph level;
  const auto n = graph.NumNodes();
  level.adjacency.resize(n);
  level.self_loop.assign(n, 0.0);
  level.degree.assign(n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (const Arc& arc : graph.Neighbors(u)) {
      const double w = static_cast<double>(arc.weight);
      level.adjacency[u].emplace_back(arc.target, w);
      level.degree[u] += w;
    }
    level.total_weight += level.degree[u];
  }
  return level;
}

LevelGraph Aggregate(const LevelGraph& level, const std::vector<int>& community,
                     int num_communities) {
  LevelGraph coarse;
  coarse.adjacency.resize(num_communities);
  coarse.self_loop.assign(num_communities, 0.0);
  coarse.degree.assign(num_communities, 0.0);
  coarse.total_weight = level.total_weight;
  std::vector<std::map<std::uint32_t, double>> merged(num_communities);
  for (std::uint32_t u = 0; u < level.size(); ++u) {
    const int cu = community[u];
    coarse.self_loop[cu] += level.self_loop[u];
    coarse.degree[cu] += level.degree[u];
    for (const auto& [v, w] : level.adjacency[u]) {
      const int cv = community[v];
      if (cu == cv) {
        coarse.self_loop[cu] += w;
      } else {
        merged[cu][static_cast<std::uint32_t>(cv)] += w;
      }
    }
  }
  for (int c = 0; c < num_communities; ++c) {
    coarse.adjacency[c].assign(merged[c].begin(), merged[c].end());
  }
  return coarse;
}

// One level of local moving. Returns true if any node changed community.
bool LocalMoving(const LevelGraph& level, std::vector<int>& community,
                 Rng& rng, const LouvainOptions& options) {
  const auto n = level.size();
  const double m2 = level.total_weight;
  std::vector<double> tot(n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) tot[community[u]] += level.degree[u];

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(std::span<std::uint32_t>(order));

  std::vector<double> link(n, 0.0);
  std::vector<char> is_touched(n, 0);
  std::vector<int> touched;
  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto u : order) {
      const int current = community[u];
      const double k_u = level.degree[u];
      touched.clear();
      for (const auto& [v, w] : level.adjacency[u]) {
        const int cv = community[v];
        if (!is_touched[cv]) {
          is_touched[cv] = 1;
          touched.push_back(cv);
        }
        link[cv] += w;
      }
      tot[current] -= k_u;
      const auto gain = [&](int c) {
        return link[c] - options.resolution * tot[c] * k_u / m2;
      };
      int best = current;
      double best_gain = gain(current);
      std::sort(touched.begin(), touched.end());
      const double eps = 1e-12 * std::max(1.0, k_u);
      for (int c : touched) {
        if (c == current) continue;
        const double g = gain(c);
        // Strictly better than staying; equal gains keep the lowest id
        // because candidates are scanned in ascending order.
        if (g > best_gain + eps) {
          best = c;
          best_gain = g;
        }
      }
      tot[best] += k_u;
      for (int c : touched) {
        link[c] = 0.0;
        is_touched[c] = 0;
      }
      if (best != current) {
        community[u] = best;
        improved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

int Renumber(std::vector<int>& community) {
  std::map<int, int> remap;
  for (int& c : community) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
  return static_cast<int>(remap.size());
}

}  // namespace

int CommunityAssignment::NumCommunities() const {
  int max_label = -1;
  for (const auto& [id, label] : labels) max_label = std::max(max_label, label);
  return max_label + 1;
}

int CommunityAssignment::Label(ViewId view) const {
  auto it = labels.find(view);
  if (it == labels.end()) throw UnknownNode(view);
  return it->second;
}

std::vector<std::vector<ViewId>> CommunityAssignment::Members() const {
  std::vector<std::vector<ViewId>> members(NumCommunities());
  for (const auto& [id, label] : labels) members[label].push_back(id);
  return members;
}

CommunityLabels NormalizeLabels(const CommunityLabels& labels) {
  std::map<int, int> remap;
  CommunityLabels normalized;
  for (const auto& [id, label] : labels) {
    auto [it, inserted] = remap.emplace(label, static_cast<int>(remap.size()));
    normalized.emplace(id, it->second);
  }
  return normalized;
}

double Modularity(const ViewGraph& graph, const CommunityLabels& labels,
                  double resolution) {
  if (graph.NumEdges() == 0) throw EmptyGraph();
  std::vector<int> community(graph.NumNodes());
  for (std::uint32_t u = 0; u < graph.NumNodes(); ++u) {
    auto it = labels.find(graph.NodeAt(u));
    if (it == labels.end()) {
      throw InvalidArgument("community labels do not cover every node");
    }
    community[u] = it->second;
  }
  std::map<int, double> internal;  // sum of A_ij over ordered pairs
  std::map<int, double> total;     // sum of degrees
  double m2 = 0.0;
  for (std::uint32_t u = 0; u < graph.NumNodes(); ++u) {
    for (const Arc& arc : graph.Neighbors(u)) {
      const double w = static_cast<double>(arc.weight);
      m2 += w;
      total[community[u]] += w;
      if (community[arc.target] == community[u]) internal[community[u]] += w;
    }
  }
  if (m2 <= 0.0) throw EmptyGraph();
  double q = 0.0;
  for (const auto& [c, tot] : total) {
    const double in = internal.contains(c) ? internal.at(c) : 0.0;
    q += in / m2 - resolution * (tot / m2) * (tot / m2);
  }
  return q;
}

CommunityAssignment Louvain(const ViewGraph& graph, std::uint64_t seed,
                            const LouvainOptions& options) {
  CommunityAssignment result;
  const auto n = graph.NumNodes();
  // node -> community at the finest level
  std::vector<int> membership(n);
  std::iota(membership.begin(), membership.end(), 0);

  bool weightless = true;
  for (const auto& edge : graph.Edges()) weightless &= edge.match_count == 0;
  if (weightless) {
    for (std::uint32_t u = 0; u < n; ++u) result.labels.emplace(graph.NodeAt(u), u);
    result.labels = NormalizeLabels(result.labels);
    return result;
  }

  const auto to_labels = [&](const std::vector<int>& m) {
    CommunityLabels labels;
    for (std::uint32_t u = 0; u < n; ++u) labels.emplace(graph.NodeAt(u), m[u]);
    return NormalizeLabels(labels);
  };

  Rng rng(seed);
  LevelGraph level = FromViewGraph(graph);
  double current_q = Modularity(graph, to_labels(membership), options.resolution);
  while (true) {
    std::vector<int> community(level.size());
    std::iota(community.begin(), community.end(), 0);
    if (!LocalMoving(level, community, rng, options)) break;
    const int num_communities = Renumber(community);
    std::vector<int> candidate = membership;
    for (auto& c : candidate) c = community[c];
    const double q = Modularity(graph, to_labels(candidate), options.resolution);
    if (!(q > current_q + options.min_gain)) break;
    membership = std::move(candidate);
    current_q = q;
    result.level_modularity.push_back(q);
    ++result.level_count;
    if (num_communities == static_cast<int>(level.size())) break;
    level = Aggregate(level, community, num_communities);
  }
  result.labels = to_labels(membership);
  result.modularity = current_q;
  return result;
}

}  // namespace longtail
