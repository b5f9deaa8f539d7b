#include "longtail/steiner.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "longtail/errors.h"
#include "longtail/random.h"

namespace longtail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct WeightedEdge {
  double length;
  std::uint32_t a;  // a < b
  std::uint32_t b;

  bool operator<(const WeightedEdge& other) const {
    return std::tie(length, a, b) < std::tie(other.length, other.a, other.b);
  }
};

}  // namespace

std::string_view SteinerWeightName(SteinerWeight mode) {
  return mode == SteinerWeight::kUnitHop ? "unit_hop" : "inverse_match";
}

SteinerWeight SteinerWeightFromName(std::string_view name) {
  if (name == "unit_hop") return SteinerWeight::kUnitHop;
  if (name == "inverse_match") return SteinerWeight::kInverseMatch;
  throw InvalidArgument(fmt::format("unknown Steiner weight mode '{}'", name));
}

double EdgeLength(MatchCount weight, SteinerWeight mode) {
  if (mode == SteinerWeight::kUnitHop) return 1.0;
  return weight > 0 ? 1.0 / static_cast<double>(weight) : kInf;
}

std::vector<ViewId> SelectTerminals(std::span<const ViewId> part,
                                    const CommunityAssignment& communities,
                                    std::uint64_t seed) {
  std::map<int, std::vector<ViewId>> by_community;
  for (ViewId id : part) by_community[communities.Label(id)].push_back(id);
  Rng rng(seed);
  std::vector<ViewId> terminals;
  for (auto& [c, members] : by_community) {
    std::sort(members.begin(), members.end());
    terminals.push_back(members[rng.UniformIndex(members.size())]);
  }
  return terminals;
}

SteinerResult ApproximateSteinerTree(const ViewGraph& graph,
                                     std::span<const ViewId> terminals,
                                     SteinerWeight mode) {
  if (terminals.empty()) throw InvalidArgument("Steiner tree needs at least one terminal");
  std::vector<std::uint32_t> term_idx;
  for (ViewId t : terminals) term_idx.push_back(graph.IndexOf(t));
  std::sort(term_idx.begin(), term_idx.end());
  term_idx.erase(std::unique(term_idx.begin(), term_idx.end()), term_idx.end());

  SteinerResult result;
  for (auto t : term_idx) result.terminals.push_back(graph.NodeAt(t));
  if (term_idx.size() == 1) {
    result.tree_nodes = result.terminals;
    return result;
  }

  const auto n = graph.NumNodes();
  const std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  // Reachability of every terminal from the first one.
  {
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack = {term_idx.front()};
    seen[term_idx.front()] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const Arc& arc : graph.Neighbors(u)) {
        if (!seen[arc.target] && EdgeLength(arc.weight, mode) < kInf) {
          seen[arc.target] = 1;
          stack.push_back(arc.target);
        }
      }
    }
    std::vector<ViewId> unreachable;
    for (auto t : term_idx) {
      if (!seen[t]) unreachable.push_back(graph.NodeAt(t));
    }
    if (!unreachable.empty()) throw DisconnectedTerminals(std::move(unreachable));
  }

  // Multi-source Dijkstra; `source` is the Voronoi region of each node.
  std::vector<double> dist(n, kInf);
  std::vector<std::uint32_t> pred(n, kNone);
  std::vector<std::uint32_t> source(n, kNone);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (auto t : term_idx) {
    dist[t] = 0.0;
    source[t] = t;
    queue.emplace(0.0, t);
  }
  std::vector<char> done(n, 0);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const Arc& arc : graph.Neighbors(u)) {
      const auto v = arc.target;
      if (done[v]) continue;
      const double nd = d + EdgeLength(arc.weight, mode);
      if (nd < dist[v] || (nd == dist[v] && u < pred[v])) {
        if (nd < dist[v]) queue.emplace(nd, v);
        dist[v] = nd;
        pred[v] = u;
        source[v] = source[u];
      }
    }
  }

  // Terminal distance graph restricted to Voronoi boundary edges.
  std::map<std::pair<std::uint32_t, std::uint32_t>, WeightedEdge> closure;
  std::map<std::pair<std::uint32_t, std::uint32_t>, WeightedEdge> bridge;
  for (std::uint32_t u = 0; u < n; ++u) {
    if (source[u] == kNone) continue;
    for (const Arc& arc : graph.Neighbors(u)) {
      const auto v = arc.target;
      if (u > v || source[v] == kNone || source[u] == source[v]) continue;
      const double len = EdgeLength(arc.weight, mode);
      if (len == kInf) continue;
      const double total = dist[u] + len + dist[v];
      auto key = std::minmax(source[u], source[v]);
      WeightedEdge candidate{total, u, v};
      auto it = closure.find(key);
      if (it == closure.end() || candidate < it->second) {
        closure[key] = candidate;
        bridge[key] = WeightedEdge{len, u, v};
      }
    }
  }
  std::vector<std::pair<WeightedEdge, std::pair<std::uint32_t, std::uint32_t>>> closure_edges;
  for (const auto& [key, edge] : closure) {
    closure_edges.push_back({WeightedEdge{edge.length, key.first, key.second}, key});
  }
  std::sort(closure_edges.begin(), closure_edges.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  // MST of the terminal distance graph, expanded into original edges.
  DisjointSets terminal_sets(n);
  std::set<std::pair<std::uint32_t, std::uint32_t>> expanded;
  const auto add_path = [&](std::uint32_t v) {
    while (pred[v] != kNone) {
      expanded.insert(std::minmax(v, pred[v]));
      v = pred[v];
    }
  };
  for (const auto& [edge, key] : closure_edges) {
    if (!terminal_sets.Union(key.first, key.second)) continue;
    const auto& b = bridge.at(key);
    expanded.insert(std::minmax(b.a, b.b));
    add_path(b.a);
    add_path(b.b);
  }

  // Length lookup for expanded edges.
  const auto arc_length = [&](std::uint32_t a, std::uint32_t b) {
    for (const Arc& arc : graph.Neighbors(a)) {
      if (arc.target == b) return EdgeLength(arc.weight, mode);
    }
    throw InvariantViolation("expanded Steiner edge is not in the graph");
  };
  std::vector<WeightedEdge> candidate_edges;
  for (const auto& [a, b] : expanded) candidate_edges.push_back({arc_length(a, b), a, b});
  std::sort(candidate_edges.begin(), candidate_edges.end());

  DisjointSets tree_sets(n);
  std::map<std::uint32_t, std::set<std::uint32_t>> tree;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> tree_length;
  for (const auto& edge : candidate_edges) {
    if (!tree_sets.Union(edge.a, edge.b)) continue;
    tree[edge.a].insert(edge.b);
    tree[edge.b].insert(edge.a);
    tree_length[{edge.a, edge.b}] = edge.length;
  }

  // Strip non-terminal leaves until every leaf is a terminal.
  const std::set<std::uint32_t> terminal_set(term_idx.begin(), term_idx.end());
  std::vector<std::uint32_t> leaves;
  for (const auto& [u, adj] : tree) {
    if (adj.size() <= 1 && !terminal_set.contains(u)) leaves.push_back(u);
  }
  while (!leaves.empty()) {
    const auto u = leaves.back();
    leaves.pop_back();
    auto it = tree.find(u);
    if (it == tree.end()) continue;
    for (const auto v : it->second) {
      tree[v].erase(u);
      tree_length.erase(std::minmax(u, v));
      if (tree[v].size() <= 1 && !terminal_set.contains(v)) leaves.push_back(v);
    }
    tree.erase(it);
  }

  for (const auto& [u, adj] : tree) result.tree_nodes.push_back(graph.NodeAt(u));
  for (const auto& [key, length] : tree_length) {
    result.tree_edges.emplace_back(graph.NodeAt(key.first), graph.NodeAt(key.second));
    result.total_weight += length;
  }
  return result;
}

std::vector<ViewId> MaxTerminalSubtree(const SteinerResult& tree,
                                       std::size_t budget) {
  if (budget == 0) return {};
  if (tree.tree_nodes.size() <= budget) return tree.tree_nodes;

  const auto& nodes = tree.tree_nodes;  // sorted
  const auto n = nodes.size();
  const auto index_of = [&](ViewId id) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const auto& [a, b] : tree.tree_edges) {
    adjacency[index_of(a)].push_back(index_of(b));
    adjacency[index_of(b)].push_back(index_of(a));
  }
  std::vector<char> is_terminal(n, 0);
  for (ViewId t : tree.terminals) is_terminal[index_of(t)] = 1;

  struct Value {
    bool valid = false;
    int terminals = 0;
    std::int64_t id_sum = 0;
  };
  const auto better = [](const Value& x, const Value& y) {
    if (!x.valid) return false;
    if (!y.valid) return true;
    if (x.terminals != y.terminals) return x.terminals > y.terminals;
    return x.id_sum < y.id_sum;
  };

  // Root at the smallest id and order nodes so children precede parents.
  std::vector<std::size_t> parent(n, n), order;
  order.reserve(n);
  std::vector<std::size_t> stack = {0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (auto v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (parent[u] < n) children[parent[u]].push_back(u);
  }
  for (auto& c : children) std::sort(c.begin(), c.end());

  const std::size_t cap = budget;
  std::vector<std::vector<Value>> dp(n);
  // choice[u][i][k]: nodes taken from child i when u's subtree has size k
  // after merging children 0..i.
  std::vector<std::vector<std::vector<std::size_t>>> choice(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto u = *it;
    auto& cur = dp[u];
    cur.assign(cap + 1, Value{});
    cur[1] = {true, is_terminal[u] ? 1 : 0, static_cast<std::int64_t>(nodes[u])};
    for (auto c : children[u]) {
      std::vector<Value> merged = cur;
      std::vector<std::size_t> taken(cap + 1, 0);
      for (std::size_t k = 2; k <= cap; ++k) {
        for (std::size_t j = 1; j < k; ++j) {
          const auto& a = cur[k - j];
          const auto& b = dp[c][j];
          if (!a.valid || !b.valid) continue;
          Value combined{true, a.terminals + b.terminals, a.id_sum + b.id_sum};
          if (better(combined, merged[k])) {
            merged[k] = combined;
            taken[k] = j;
          }
        }
      }
      cur = std::move(merged);
      choice[u].push_back(std::move(taken));
    }
  }

  std::size_t best_root = n;
  for (std::size_t u = 0; u < n; ++u) {
    if (best_root == n || better(dp[u][cap], dp[best_root][cap])) best_root = u;
  }
  if (best_root == n || !dp[best_root][cap].valid) {
    throw InvariantViolation("no connected subtree of the requested size");
  }

  std::vector<ViewId> kept;
  std::function<void(std::size_t, std::size_t)> collect = [&](std::size_t u,
                                                               std::size_t k) {
    for (std::size_t i = children[u].size(); i-- > 0;) {
      const auto j = choice[u][i][k];
      if (j > 0) {
        collect(children[u][i], j);
        k -= j;
      }
    }
    kept.push_back(nodes[u]);
  };
  collect(best_root, cap);
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace longtail
