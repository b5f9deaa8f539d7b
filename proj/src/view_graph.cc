#include "longtail/view_graph.h"

#include <algorithm>
#include <deque>
#include <numeric>

#include <fmt/format.h>

#include "longtail/errors.h"

namespace longtail {

ViewGraph ViewGraph::FromEdges(std::vector<ViewId> nodes,
                               const std::vector<MatchEdge>& edges) {
  ViewGraph graph;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  graph.nodes_ = std::move(nodes);
  graph.index_.reserve(graph.nodes_.size());
  for (std::uint32_t i = 0; i < graph.nodes_.size(); ++i) {
    graph.index_.emplace(graph.nodes_[i], i);
  }
  graph.adjacency_.resize(graph.nodes_.size());
  for (const auto& edge : edges) {
    if (edge.view_a == edge.view_b) throw SelfLoop(edge.view_a, 0);
    const auto a = graph.IndexOf(edge.view_a);
    const auto b = graph.IndexOf(edge.view_b);
    graph.adjacency_[a].push_back({b, edge.match_count});
    graph.adjacency_[b].push_back({a, edge.match_count});
  }
  for (auto& arcs : graph.adjacency_) {
    std::sort(arcs.begin(), arcs.end(),
              [](const Arc& x, const Arc& y) { return x.target < y.target; });
    const auto dup = std::adjacent_find(
        arcs.begin(), arcs.end(),
        [](const Arc& x, const Arc& y) { return x.target == y.target; });
    if (dup != arcs.end()) {
      throw DuplicateId("edge endpoint", graph.nodes_[dup->target]);
    }
    graph.num_edges_ += arcs.size();
  }
  graph.num_edges_ /= 2;
  return graph;
}

std::optional<std::uint32_t> ViewGraph::FindIndex(ViewId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t ViewGraph::IndexOf(ViewId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownNode(id);
  return it->second;
}

std::vector<MatchEdge> ViewGraph::Edges() const {
  std::vector<MatchEdge> edges;
  edges.reserve(num_edges_);
  for (std::uint32_t u = 0; u < nodes_.size(); ++u) {
    for (const Arc& arc : adjacency_[u]) {
      if (u < arc.target) edges.push_back({nodes_[u], nodes_[arc.target], arc.weight});
    }
  }
  return edges;
}

ViewGraph ViewGraph::InducedSubgraph(std::span<const ViewId> nodes) const {
  std::vector<char> keep(nodes_.size(), 0);
  for (ViewId id : nodes) keep[IndexOf(id)] = 1;
  std::vector<MatchEdge> edges;
  for (std::uint32_t u = 0; u < nodes_.size(); ++u) {
    if (!keep[u]) continue;
    for (const Arc& arc : adjacency_[u]) {
      if (u < arc.target && keep[arc.target]) {
        edges.push_back({nodes_[u], nodes_[arc.target], arc.weight});
      }
    }
  }
  auto sub = FromEdges({nodes.begin(), nodes.end()}, edges);
  sub.prune_threshold_ = prune_threshold_;
  return sub;
}

ViewGraph ViewGraph::Pruned(MatchCount threshold) const {
  ViewGraph pruned = *this;
  pruned.num_edges_ = 0;
  for (auto& arcs : pruned.adjacency_) {
    std::erase_if(arcs, [threshold](const Arc& arc) { return arc.weight < threshold; });
    pruned.num_edges_ += arcs.size();
  }
  pruned.num_edges_ /= 2;
  pruned.prune_threshold_ = std::max(prune_threshold_, threshold);
  return pruned;
}

ViewGraph BuildGraph(const SceneReconstruction& scene) {
  return ViewGraph::FromEdges(scene.ViewIds(), scene.edges);
}

ViewGraph PruneEdges(const ViewGraph& graph, MatchCount threshold) {
  if (threshold < 0) throw InvalidArgument("prune threshold must be >= 0");
  return graph.Pruned(threshold);
}

std::vector<int> MultiSourceBfs(const ViewGraph& graph,
                                std::span<const std::uint32_t> sources,
                                int max_depth) {
  std::vector<int> dist(graph.NumNodes(), -1);
  std::deque<std::uint32_t> queue;
  for (auto s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (max_depth >= 0 && dist[u] >= max_depth) continue;
    for (const Arc& arc : graph.Neighbors(u)) {
      if (dist[arc.target] < 0) {
        dist[arc.target] = dist[u] + 1;
        queue.push_back(arc.target);
      }
    }
  }
  return dist;
}

std::vector<std::vector<ViewId>> ConnectedComponents(const ViewGraph& graph) {
  std::vector<std::vector<ViewId>> components;
  std::vector<char> seen(graph.NumNodes(), 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t start = 0; start < graph.NumNodes(); ++start) {
    if (seen[start]) continue;
    std::vector<ViewId> component;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      component.push_back(graph.NodeAt(u));
      for (const Arc& arc : graph.Neighbors(u)) {
        if (!seen[arc.target]) {
          seen[arc.target] = 1;
          stack.push_back(arc.target);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

std::size_t CountInducedComponents(const ViewGraph& graph,
                                   std::span<const ViewId> nodes) {
  if (nodes.empty()) return 0;
  return ConnectedComponents(graph.InducedSubgraph(nodes)).size();
}

GraphStatsReport ComputeStats(const ViewGraph& graph) {
  GraphStatsReport report;
  report.node_count = graph.NumNodes();
  report.edge_count = graph.NumEdges();
  report.prune_threshold = graph.PruneThreshold();
  for (std::uint32_t u = 0; u < graph.NumNodes(); ++u) {
    ++report.degree_histogram[graph.Degree(u)];
  }
  for (int k = 0; k <= 3; ++k) {
    std::size_t count = 0;
    for (const auto& [degree, n] : report.degree_histogram) {
      if (degree <= static_cast<std::size_t>(k)) count += n;
    }
    report.frac_degree_le[k] =
        report.node_count == 0
            ? 0.0
            : static_cast<double>(count) / static_cast<double>(report.node_count);
  }
  if (graph.NumEdges() > 0) {
    double total = 0.0;
    for (const auto& edge : graph.Edges()) total += static_cast<double>(edge.match_count);
    report.mean_match_count = total / static_cast<double>(graph.NumEdges());
  }
  for (const auto& component : ConnectedComponents(graph)) {
    report.connected_component_sizes.push_back(component.size());
  }
  std::sort(report.connected_component_sizes.rbegin(),
            report.connected_component_sizes.rend());
  return report;
}

std::string FormatStatsReport(const GraphStatsReport& report) {
  std::string out;
  out += "[summary]\n";
  out += fmt::format("node_count = {}\n", report.node_count);
  out += fmt::format("edge_count = {}\n", report.edge_count);
  out += fmt::format("prune_threshold = {}\n", report.prune_threshold);
  if (report.mean_match_count) {
    out += fmt::format("mean_match_count = {}\n", *report.mean_match_count);
  } else {
    out += "mean_match_count = absent\n";
  }
  out += fmt::format("component_count = {}\n", report.connected_component_sizes.size());
  for (const auto& [k, frac] : report.frac_degree_le) {
    out += fmt::format("frac_degree_le_{} = {}\n", k, frac);
  }
  out += "\n[degree_histogram]\n";
  for (const auto& [degree, count] : report.degree_histogram) {
    out += fmt::format("{} = {}\n", degree, count);
  }
  out += "\n[component_sizes]\n";
  for (std::size_t i = 0; i < report.connected_component_sizes.size(); ++i) {
    out += fmt::format("{} = {}\n", i, report.connected_component_sizes[i]);
  }
  return out;
}

}  // namespace longtail
