#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "longtail/community.h"
#include "longtail/execution.h"
#include "longtail/partition.h"
#include "longtail/scene.h"
#include "longtail/steiner.h"
#include "longtail/view_graph.h"

namespace longtail {

enum class Preset { kDense, kSparse, kMixed, kRandom };

std::string_view PresetName(Preset preset);
Preset PresetFromName(std::string_view name);

enum class Phase { kTerminal, kSteiner, kGreedy, kFill, kDfs };

std::string_view PhaseName(Phase phase);
Phase PhaseFromName(std::string_view name);

struct SamplingConfig {
  int n_views = 24;
  int n_cc = 1;
  int depth = 24;
  MatchCount prune_threshold = kDefaultPruneThreshold;
  SteinerWeight weight_mode = SteinerWeight::kUnitHop;
  std::uint64_t seed = 0;
  std::optional<Preset> preset;

  // Applies preset values (Dense: D=5, N_cc=1; Sparse: D=24, N_cc=4; Mixed:
  // D in [5, 24] and N_cc in [1, 4] drawn from `seed`).
  SamplingConfig Resolved() const;
  // Throws InvalidArgument.
  void Validate() const;

  bool operator==(const SamplingConfig&) const = default;
};

struct ViewProvenance {
  int partition = 0;
  int community = 0;
  Phase phase = Phase::kFill;

  bool operator==(const ViewProvenance&) const = default;
};

struct SampledBatch {
  std::string scene_id;
  SamplingConfig config;
  std::vector<ViewId> views;
  std::vector<ViewProvenance> provenance;
  // Set when the scene could not supply n_views distinct views.
  bool truncated = false;

  bool operator==(const SampledBatch&) const = default;
};

// One greedy step from `current`: among unsampled neighbors, pick the one
// ranked first by (community not yet covered, larger distance from current,
// smaller id). Returns nullopt when every neighbor is already sampled.
std::optional<ViewId> GreedyStep(const ViewGraph& graph, ViewId current,
                                 const std::set<ViewId>& sampled,
                                 const CommunityAssignment& communities,
                                 const PositionMap& positions);

struct PartitionSample {
  std::vector<ViewId> views;
  std::vector<Phase> phases;
};

// Samples up to `quota` connected views from one partition. Terminals and
// Steiner nodes come first, then greedy steps, both within a search budget
// of min(quota, depth) views; the remaining quota is filled from growing
// hop rings around the searched views.
PartitionSample SamplePartition(const ViewGraph& graph,
                                std::span<const ViewId> part, int quota,
                                int depth,
                                const CommunityAssignment& communities,
                                const PositionMap& positions,
                                std::uint64_t seed,
                                SteinerWeight weight_mode = SteinerWeight::kUnitHop);

// Uniformly random composition of `total` into `parts` positive integers.
std::vector<int> RandomComposition(int total, int parts, std::uint64_t seed);

// Holds the per-scene state that is shared by every batch: the pruned graph,
// its communities and camera positions.
class SceneSampler {
 public:
  SceneSampler(const SceneReconstruction& scene,
               MatchCount prune_threshold = kDefaultPruneThreshold,
               std::uint64_t community_seed = 0);

  const ViewGraph& Graph() const { return graph_; }
  const CommunityAssignment& Communities() const { return communities_; }
  const PositionMap& Positions() const { return positions_; }
  const std::string& SceneId() const { return scene_id_; }

  // One batch; config.seed drives every random choice.
  SampledBatch Sample(const SamplingConfig& config) const;

  // `count` batches, batch b using seed MixSeed(config.seed, b). The
  // parallel path returns exactly the serial result.
  std::vector<SampledBatch> SampleMany(const SamplingConfig& config,
                                       std::size_t count,
                                       Execution execution = Execution::kParallel) const;

 private:
  SampledBatch SampleRandom(const SamplingConfig& config) const;

  std::string scene_id_;
  ViewGraph graph_;
  CommunityAssignment communities_;
  PositionMap positions_;
};

// Convenience wrapper that builds a SceneSampler for a single batch.
SampledBatch SampleBatch(const SceneReconstruction& scene,
                         const SamplingConfig& config);

// DFS preorder over the subgraph induced by the batch, restarting from a
// random unvisited batch view whenever a component is exhausted, until k
// views are collected. Throws InvalidArgument unless 2 <= k <= |batch|.
SampledBatch DfsSubsample(const SampledBatch& batch, const ViewGraph& graph,
                          int k, std::uint64_t seed);

}  // namespace longtail
