#include "longtail/sampler.h"

#include <algorithm>
#include <exception>
#include <map>

#include <fmt/format.h>

#include "longtail/errors.h"
#include "longtail/random.h"

namespace longtail {
namespace {

// Sub-stream ids for MixSeed.
enum Stream : std::uint64_t {
  kStreamTerminals = 1,
  kStreamWalkStart = 2,
  kStreamFill = 3,
  kStreamPresetDepth = 4,
  kStreamPresetNcc = 5,
  kStreamPartition = 10,
  kStreamQuota = 11,
  kStreamRandomPreset = 12,
  kStreamPartitionBase = 100,
};

}  // namespace

std::string_view PresetName(Preset preset) {
  switch (preset) {
    case Preset::kDense: return "dense";
    case Preset::kSparse: return "sparse";
    case Preset::kMixed: return "mixed";
    case Preset::kRandom: return "random";
  }
  return "";
}

Preset PresetFromName(std::string_view name) {
  if (name == "dense") return Preset::kDense;
  if (name == "sparse") return Preset::kSparse;
  if (name == "mixed") return Preset::kMixed;
  if (name == "random") return Preset::kRandom;
  throw InvalidArgument(fmt::format("unknown preset '{}'", name));
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kTerminal: return "terminal";
    case Phase::kSteiner: return "steiner";
    case Phase::kGreedy: return "greedy";
    case Phase::kFill: return "fill";
    case Phase::kDfs: return "dfs";
  }
  return "";
}

Phase PhaseFromName(std::string_view name) {
  if (name == "terminal") return Phase::kTerminal;
  if (name == "steiner") return Phase::kSteiner;
  if (name == "greedy") return Phase::kGreedy;
  if (name == "fill") return Phase::kFill;
  if (name == "dfs") return Phase::kDfs;
  throw InvalidArgument(fmt::format("unknown phase '{}'", name));
}

SamplingConfig SamplingConfig::Resolved() const {
  SamplingConfig resolved = *this;
  if (!preset) return resolved;
  switch (*preset) {
    case Preset::kDense:
      resolved.depth = 5;
      resolved.n_cc = 1;
      break;
    case Preset::kSparse:
      resolved.depth = 24;
      resolved.n_cc = 4;
      break;
    case Preset::kMixed: {
      Rng depth_rng(MixSeed(seed, kStreamPresetDepth));
      Rng ncc_rng(MixSeed(seed, kStreamPresetNcc));
      resolved.depth = static_cast<int>(depth_rng.UniformInt(5, 24));
      resolved.n_cc = static_cast<int>(ncc_rng.UniformInt(1, 4));
      break;
    }
    case Preset::kRandom:
      // Uniform draws may form up to n_views components.
      resolved.n_cc = n_views;
      break;
  }
  resolved.n_cc = std::min(resolved.n_cc, resolved.n_views);
  return resolved;
}

void SamplingConfig::Validate() const {
  if (n_views < 2) throw InvalidArgument("n_views must be >= 2");
  if (n_cc < 1 || n_cc > n_views) {
    throw InvalidArgument(fmt::format("InvalidNcc: n_cc = {} must lie in [1, n_views = {}]",
                                      n_cc, n_views));
  }
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  if (prune_threshold < 0) throw InvalidArgument("prune threshold must be >= 0");
}

std::optional<ViewId> GreedyStep(const ViewGraph& graph, ViewId current,
                                 const std::set<ViewId>& sampled,
                                 const CommunityAssignment& communities,
                                 const PositionMap& positions) {
  const auto current_idx = graph.IndexOf(current);
  if (!sampled.contains(current)) {
    throw InvalidArgument("the current view must already be sampled");
  }
  const auto position_of = [&](ViewId id) -> const Eigen::Vector3d& {
    auto it = positions.find(id);
    if (it == positions.end()) {
      throw InvalidArgument(fmt::format("no camera position for view {}", id));
    }
    return it->second;
  };

  std::set<int> covered;
  for (ViewId s : sampled) covered.insert(communities.Label(s));

  const Eigen::Vector3d& origin = position_of(current);
  std::optional<ViewId> best;
  bool best_novel = false;
  double best_dist = 0.0;
  // Neighbors arrive in ascending id, so strict comparisons keep the
  // smaller id on exact ties.
  for (const Arc& arc : graph.Neighbors(current_idx)) {
    const ViewId u = graph.NodeAt(arc.target);
    if (sampled.contains(u)) continue;
    const bool novel = !covered.contains(communities.Label(u));
    const double dist = (position_of(u) - origin).norm();
    if (!best || (novel && !best_novel) ||
        (novel == best_novel && dist > best_dist)) {
      best = u;
      best_novel = novel;
      best_dist = dist;
    }
  }
  return best;
}

PartitionSample SamplePartition(const ViewGraph& graph,
                                std::span<const ViewId> part, int quota,
                                int depth,
                                const CommunityAssignment& communities,
                                const PositionMap& positions,
                                std::uint64_t seed, SteinerWeight weight_mode) {
  if (part.empty()) throw InvalidArgument("EmptyPartition: cannot sample an empty partition");
  if (quota < 1) throw InvalidArgument("partition quota must be >= 1");
  if (depth < 1) throw InvalidArgument("depth must be >= 1");

  const ViewGraph sub = graph.InducedSubgraph(part);
  const auto target = std::min<std::size_t>(quota, sub.NumNodes());
  const auto budget = std::min<std::size_t>(target, depth);

  PartitionSample sample;
  std::set<ViewId> sampled;
  const auto add = [&](ViewId id, Phase phase) {
    sample.views.push_back(id);
    sample.phases.push_back(phase);
    sampled.insert(id);
  };

  // Connectivity skeleton: one terminal per community, linked by a Steiner
  // tree and trimmed to the search budget.
  const auto terminals =
      SelectTerminals(part, communities, MixSeed(seed, kStreamTerminals));
  const auto tree = ApproximateSteinerTree(sub, terminals, weight_mode);
  const auto skeleton = MaxTerminalSubtree(tree, budget);
  const std::set<ViewId> terminal_set(tree.terminals.begin(), tree.terminals.end());
  for (ViewId id : skeleton) {
    add(id, terminal_set.contains(id) ? Phase::kTerminal : Phase::kSteiner);
  }

  // Greedy walk from a random skeleton node, backtracking on dead ends.
  Rng start_rng(MixSeed(seed, kStreamWalkStart));
  ViewId current = skeleton[start_rng.UniformIndex(skeleton.size())];
  const auto has_free_neighbor = [&](ViewId id) {
    for (const Arc& arc : sub.Neighbors(sub.IndexOf(id))) {
      if (!sampled.contains(sub.NodeAt(arc.target))) return true;
    }
    return false;
  };
  while (sample.views.size() < budget) {
    if (auto next = GreedyStep(sub, current, sampled, communities, positions)) {
      add(*next, Phase::kGreedy);
      current = *next;
      continue;
    }
    auto it = std::find_if(sample.views.rbegin(), sample.views.rend(), has_free_neighbor);
    if (it == sample.views.rend()) break;
    current = *it;
  }

  // Fill from hop rings around the searched views, one ring at a time, so
  // every filled view touches an already sampled one.
  if (sample.views.size() < target) {
    std::vector<std::uint32_t> sources;
    for (ViewId id : sample.views) sources.push_back(sub.IndexOf(id));
    const auto hops = MultiSourceBfs(sub, sources);
    std::map<int, std::vector<ViewId>> rings;
    for (std::uint32_t u = 0; u < sub.NumNodes(); ++u) {
      if (hops[u] > 0) rings[hops[u]].push_back(sub.NodeAt(u));
    }
    Rng fill_rng(MixSeed(seed, kStreamFill));
    for (auto& [hop, ring] : rings) {
      fill_rng.Shuffle(std::span<ViewId>(ring));
      for (ViewId id : ring) {
        if (sample.views.size() >= target) break;
        add(id, Phase::kFill);
      }
      if (sample.views.size() >= target) break;
    }
  }
  return sample;
}

std::vector<int> RandomComposition(int total, int parts, std::uint64_t seed) {
  if (parts < 1 || parts > total) {
    throw InvalidArgument(
        fmt::format("cannot split {} into {} positive parts", total, parts));
  }
  std::vector<int> cuts(total - 1);
  for (int i = 0; i < total - 1; ++i) cuts[i] = i + 1;
  Rng rng(seed);
  rng.Shuffle(std::span<int>(cuts));
  cuts.resize(parts - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> sizes;
  int prev = 0;
  for (int cut : cuts) {
    sizes.push_back(cut - prev);
    prev = cut;
  }
  sizes.push_back(total - prev);
  return sizes;
}

SceneSampler::SceneSampler(const SceneReconstruction& scene,
                           MatchCount prune_threshold,
                           std::uint64_t community_seed)
    : scene_id_(scene.scene_id),
      graph_(PruneEdges(BuildGraph(scene), prune_threshold)),
      communities_(Louvain(graph_, community_seed)),
      positions_(scene.Positions()) {}

SampledBatch SceneSampler::SampleRandom(const SamplingConfig& config) const {
  SampledBatch batch;
  batch.scene_id = scene_id_;
  batch.config = config;
  std::vector<ViewId> pool = graph_.Nodes();
  Rng rng(MixSeed(config.seed, kStreamRandomPreset));
  rng.Shuffle(std::span<ViewId>(pool));
  const auto n = std::min<std::size_t>(config.n_views, pool.size());
  for (std::size_t i = 0; i < n; ++i) {
    batch.views.push_back(pool[i]);
    batch.provenance.push_back({0, communities_.Label(pool[i]), Phase::kFill});
  }
  batch.truncated = n < static_cast<std::size_t>(config.n_views);
  return batch;
}

SampledBatch SceneSampler::Sample(const SamplingConfig& config) const {
  SamplingConfig resolved = config.Resolved();
  resolved.prune_threshold = graph_.PruneThreshold();
  resolved.Validate();
  if (graph_.NumNodes() == 0) throw InvalidArgument("scene has no views");
  if (resolved.preset == Preset::kRandom) return SampleRandom(resolved);

  resolved.n_cc = std::min<int>(resolved.n_cc, static_cast<int>(graph_.NumNodes()));
  const auto partitioning = PartitionRoundRobin(
      graph_, resolved.n_cc, MixSeed(resolved.seed, kStreamPartition), communities_);
  const auto quotas = RandomComposition(resolved.n_views, resolved.n_cc,
                                        MixSeed(resolved.seed, kStreamQuota));

  // Quota a partition cannot hold moves to later partitions with room.
  const auto n_parts = partitioning.parts.size();
  std::vector<int> assigned(n_parts);
  int surplus = 0;
  for (std::size_t i = 0; i < n_parts; ++i) {
    const int capacity = static_cast<int>(partitioning.parts[i].size());
    assigned[i] = std::min(quotas[i], capacity);
    surplus += quotas[i] - assigned[i];
  }
  for (std::size_t i = 0; i < n_parts && surplus > 0; ++i) {
    const int room = static_cast<int>(partitioning.parts[i].size()) - assigned[i];
    const int extra = std::min(room, surplus);
    assigned[i] += extra;
    surplus -= extra;
  }

  SampledBatch batch;
  batch.scene_id = scene_id_;
  batch.config = resolved;
  for (std::size_t i = 0; i < n_parts; ++i) {
    const auto sample = SamplePartition(
        graph_, partitioning.parts[i], assigned[i], resolved.depth, communities_,
        positions_, MixSeed(resolved.seed, kStreamPartitionBase + i),
        resolved.weight_mode);
    for (std::size_t j = 0; j < sample.views.size(); ++j) {
      batch.views.push_back(sample.views[j]);
      batch.provenance.push_back({static_cast<int>(i),
                                  communities_.Label(sample.views[j]),
                                  sample.phases[j]});
    }
  }
  batch.truncated = batch.views.size() < static_cast<std::size_t>(resolved.n_views);

  const auto components = CountInducedComponents(graph_, batch.views);
  if (components > static_cast<std::size_t>(resolved.n_cc)) {
    throw InvariantViolation(fmt::format(
        "sampled batch forms {} components, more than n_cc = {}", components,
        resolved.n_cc));
  }
  return batch;
}

std::vector<SampledBatch> SceneSampler::SampleMany(const SamplingConfig& config,
                                                   std::size_t count,
                                                   Execution execution) const {
  std::vector<SampledBatch> batches(count);
  std::vector<std::exception_ptr> errors(count);
  const auto run_one = [&](std::size_t b) {
    try {
      SamplingConfig batch_config = config;
      batch_config.seed = MixSeed(config.seed, b);
      batches[b] = Sample(batch_config);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };
  if (execution == Execution::kSerial) {
    for (std::size_t b = 0; b < count; ++b) run_one(b);
  } else {
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < n; ++b) run_one(static_cast<std::size_t>(b));
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return batches;
}

SampledBatch SampleBatch(const SceneReconstruction& scene,
                         const SamplingConfig& config) {
  SceneSampler sampler(scene, config.prune_threshold, config.seed);
  return sampler.Sample(config);
}

SampledBatch DfsSubsample(const SampledBatch& batch, const ViewGraph& graph,
                          int k, std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > batch.views.size()) {
    throw InvalidArgument(fmt::format("InvalidK: k = {} must lie in [2, {}]", k,
                                      batch.views.size()));
  }
  const ViewGraph sub = graph.InducedSubgraph(batch.views);
  std::map<ViewId, std::size_t> position_in_batch;
  for (std::size_t i = 0; i < batch.views.size(); ++i) {
    position_in_batch.emplace(batch.views[i], i);
  }

  Rng rng(seed);
  std::vector<char> visited(sub.NumNodes(), 0);
  std::vector<ViewId> order;
  while (order.size() < static_cast<std::size_t>(k)) {
    std::vector<std::uint32_t> unvisited;
    for (std::uint32_t u = 0; u < sub.NumNodes(); ++u) {
      if (!visited[u]) unvisited.push_back(u);
    }
    std::vector<std::uint32_t> stack = {unvisited[rng.UniformIndex(unvisited.size())]};
    while (!stack.empty() && order.size() < static_cast<std::size_t>(k)) {
      const auto u = stack.back();
      stack.pop_back();
      if (visited[u]) continue;
      visited[u] = 1;
      order.push_back(sub.NodeAt(u));
      const auto neighbors = sub.Neighbors(u);
      for (auto it = neighbors.rbegin(); it != neighbors.rend(); ++it) {
        if (!visited[it->target]) stack.push_back(it->target);
      }
    }
  }

  SampledBatch result;
  result.scene_id = batch.scene_id;
  result.config = batch.config;
  result.truncated = batch.truncated;
  for (ViewId id : order) {
    result.views.push_back(id);
    ViewProvenance provenance = batch.provenance[position_in_batch.at(id)];
    provenance.phase = Phase::kDfs;
    result.provenance.push_back(provenance);
  }
  return result;
}

}  // namespace longtail
