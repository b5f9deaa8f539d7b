// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "longtail/batch_io.h"
#include "longtail/community.h"
#include "longtail/depth_filter.h"
#include "longtail/execution.h"
#include "longtail/metrics.h"
#include "longtail/partition.h"
#include "longtail/recon_io.h"
#include "longtail/sampler.h"
#include "longtail/steiner.h"
#include "longtail/synth.h"
#include "oracles.h"

namespace longtail {
namespace {

namespace lt = longtail::testing;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

SynthScene Ring(int clusters, int size, std::uint64_t seed) {
  SynthSpec spec;
  spec.cluster_count = clusters;
  spec.cluster_size = size;
  spec.seed = seed;
  return GenerateRingScene(spec);
}

// 1. Spread grows with search depth on a 12 x 12 ring.
Outcome Fig7Monotonicity() {
  const auto start = Clock::now();
  SetThreadCount(1);
  const std::vector<int> depths = {2, 6, 12, 24};
  // cov2, nearest (decreasing), graph dispersion, euclidean dispersion
  std::vector<std::array<double, 4>> means(depths.size(), {0, 0, 0, 0});
  const int seeds = 32;
  for (int s = 0; s < seeds; ++s) {
    const auto gen = Ring(12, 12, s);
    const SceneSampler sampler(gen.scene, kDefaultPruneThreshold, s);
    const auto& nodes = sampler.Graph().Nodes();
    for (std::size_t d = 0; d < depths.size(); ++d) {
      SamplingConfig config;
      config.n_views = 24;
      config.n_cc = 1;
      config.depth = depths[d];
      config.seed = MixSeed(s, 7);
      const auto batch = sampler.Sample(config);
      const auto disp = ComputeDispersion(sampler.Graph(), sampler.Positions(), batch.views,
                                          Execution::kSerial);
      means[d][0] += KHopCoverage(sampler.Graph(), batch.views, 2) / seeds;
      means[d][1] += AvgNearestSampleDist(sampler.Positions(), nodes, batch.views,
                                          Execution::kSerial) / seeds;
      means[d][2] += disp.graph / seeds;
      means[d][3] += disp.euclidean / seeds;
    }
  }
  SetThreadCount(0);
  const std::array<int, 4> direction = {+1, -1, +1, +1};
  int violations = 0;
  bool large_violation = false;
  for (int m = 0; m < 4; ++m) {
    for (std::size_t d = 1; d < depths.size(); ++d) {
      const double delta = direction[m] * (means[d][m] - means[d - 1][m]);
      if (delta < 0) {
        ++violations;
        if (-delta > 0.02 * std::abs(means[d - 1][m])) large_violation = true;
      }
    }
  }
  const double secs = Seconds(start);
  Outcome o;
  o.pass = violations <= 1 && !large_violation && secs < 60.0;
  std::string series;
  const char* names[] = {"cov2", "near", "gdisp", "edisp"};
  for (int m = 0; m < 4; ++m) {
    series += fmt::format(" {}=[", names[m]);
    for (std::size_t d = 0; d < depths.size(); ++d) {
      series += fmt::format("{}{:.3f}", d ? "," : "", means[d][m]);
    }
    series += "]";
  }
  o.detail = fmt::format("violations={}{} {:.2f}s", violations, series, secs);
  return o;
}

// 2. Phase accounting at D = 24 and D = 12.
Outcome Fig4Phases() {
  int bad = 0, runs = 0;
  for (std::uint64_t s = 0; s < 16; ++s) {
    const auto gen = Ring(12, 12, s);
    const SceneSampler sampler(gen.scene, kDefaultPruneThreshold, s);
    for (int depth : {24, 12}) {
      SamplingConfig config;
      config.n_views = 24;
      config.n_cc = 1;
      config.depth = depth;
      config.seed = s;
      const auto batch = sampler.Sample(config);
      int fill = 0;
      for (const auto& p : batch.provenance) fill += p.phase == Phase::kFill;
      const int expected = depth == 24 ? 0 : 12;
      bad += fill != expected || batch.views.size() != 24;
      ++runs;
    }
  }
  return {bad == 0, fmt::format("{} runs, {} with wrong fill count", runs, bad)};
}

// 3. Induced components never exceed N_cc.
Outcome ComponentBound() {
  const auto start = Clock::now();
  std::vector<SceneReconstruction> scenes;
  for (std::uint64_t s = 0; s < 4; ++s) scenes.push_back(Ring(12, 12, s).scene);
  {
    SynthSpec spec;
    spec.cluster_count = 12;
    spec.cluster_size = 10;
    spec.inter_weight = 40;  // pruned away: twelve separate components
    scenes.push_back(GenerateRingScene(spec).scene);
    spec = {};
    spec.kind = SynthKind::kGridScene;
    spec.cluster_count = 10;
    spec.cluster_size = 10;
    scenes.push_back(GenerateGridScene(spec).scene);
  }
  std::vector<SceneSampler> samplers;
  for (std::size_t i = 0; i < scenes.size(); ++i) samplers.emplace_back(scenes[i], 50, i);
  const std::array presets = {Preset::kDense, Preset::kSparse, Preset::kMixed};
  int violations = 0, batches = 0;
  for (int b = 0; b < 1000; ++b) {
    const auto& sampler = samplers[b % samplers.size()];
    SamplingConfig config;
    config.preset = presets[b % presets.size()];
    config.seed = MixSeed(2024, b);
    const auto batch = sampler.Sample(config);
    const auto components = CountInducedComponents(sampler.Graph(), batch.views);
    violations += components > static_cast<std::size_t>(batch.config.n_cc);
    ++batches;
  }
  const double secs = Seconds(start);
  return {violations == 0 && secs < 120.0,
          fmt::format("{} batches, {} violations, {:.2f}s", batches, violations, secs)};
}

// 4. Steiner approximation ratio against exhaustive search.
Outcome SteinerBound() {
  Rng rng(4);
  int bad = 0, mst_bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng.UniformIndex(7));
    const auto graph = lt::RandomConnectedGraph(rng, n, 0.25);
    const auto mode = trial % 2 ? SteinerWeight::kInverseMatch : SteinerWeight::kUnitHop;
    std::vector<ViewId> nodes = graph.Nodes();
    rng.Shuffle(std::span<ViewId>(nodes));
    const std::size_t k = 2 + trial % 3;
    std::vector<ViewId> terminals(nodes.begin(), nodes.begin() + std::min<std::size_t>(k, n));
    const double approx = ApproximateSteinerTree(graph, terminals, mode).total_weight;
    const double opt = lt::ExactSteinerWeight(graph, terminals, mode);
    const double bound = 2.0 * (1.0 - 1.0 / terminals.size()) * opt + 1e-9;
    bad += approx > bound;
    worst = std::max(worst, approx / opt);
    const double all = ApproximateSteinerTree(graph, graph.Nodes(), mode).total_weight;
    mst_bad += std::abs(all - *lt::MstWeight(graph, mode)) > 1e-12;
  }
  return {bad == 0 && mst_bad == 0,
          fmt::format("200 graphs, {} bound violations, {} MST mismatches, worst ratio {:.3f}",
                      bad, mst_bad, worst)};
}

// 5. Louvain on fixtures and per-level monotonicity.
Outcome LouvainCorrectness() {
  int fixture_bad = 0;
  for (const auto& graph : {lt::TwoCliquesBridge(4), lt::DisjointTriangles(3)}) {
    const auto best = NormalizeLabels(lt::BruteForceBestPartition(graph));
    for (std::uint64_t seed = 0; seed < 5; ++seed) fixture_bad += Louvain(graph, seed).labels != best;
  }
  Rng rng(5);
  int level_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto graph = lt::RandomConnectedGraph(rng, 20 + trial % 30, 0.08);
    const auto q = Louvain(graph, trial).level_modularity;
    for (std::size_t i = 1; i < q.size(); ++i) level_bad += q[i] < q[i - 1];
  }
  return {fixture_bad == 0 && level_bad == 0,
          fmt::format("fixture mismatches {}, level decreases {}", fixture_bad, level_bad)};
}

// 6. Greedy step equals an exhaustive sort.
Outcome GreedyOracle() {
  Rng rng(6);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(14));
    const auto graph = lt::RandomGraph(rng, n, 0.5);
    CommunityAssignment communities;
    PositionMap positions;
    for (ViewId v : graph.Nodes()) {
      communities.labels[v] = static_cast<int>(rng.UniformIndex(4));
      positions[v] = Eigen::Vector3d(rng.UniformInt(0, 4), rng.UniformInt(0, 4), rng.UniformInt(0, 1));
    }
    const ViewId current = 1 + static_cast<ViewId>(rng.UniformIndex(n));
    std::set<ViewId> sampled = {current};
    for (ViewId v : graph.Nodes()) {
      if (rng.UniformReal() < 0.3) sampled.insert(v);
    }
    std::set<int> covered;
    for (ViewId s : sampled) covered.insert(communities.labels.at(s));
    std::vector<std::tuple<int, double, ViewId>> ranked;
    for (const Arc& arc : graph.Neighbors(graph.IndexOf(current))) {
      const ViewId u = graph.NodeAt(arc.target);
      if (sampled.contains(u)) continue;
      ranked.emplace_back(covered.contains(communities.labels.at(u)) ? 1 : 0,
                          -(positions.at(u) - positions.at(current)).norm(), u);
    }
    std::sort(ranked.begin(), ranked.end());
    const std::optional<ViewId> expected =
        ranked.empty() ? std::nullopt : std::optional<ViewId>(std::get<2>(ranked.front()));
    bad += GreedyStep(graph, current, sampled, communities, positions) != expected;
  }
  return {bad == 0, fmt::format("1000 neighborhoods, {} mismatches", bad)};
}

// 7. Partition contract.
Outcome PartitionInvariants() {
  Rng rng(7);
  int bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 5 + static_cast<int>(rng.UniformIndex(60));
    const auto graph = lt::RandomGraph(rng, n, 3.0 / n);
    const auto communities = Louvain(graph, trial);
    const int n_cc = 1 + static_cast<int>(rng.UniformIndex(std::min(n, 6)));
    const auto result = PartitionRoundRobin(graph, n_cc, trial, communities);
    bad += !lt::PartitionViolations(graph, result).empty();
  }
  return {bad == 0, fmt::format("500 partitionings, {} with violations", bad)};
}

std::vector<bool> RemovalMask(const DepthMap& geom, const DepthMap& mono) {
  const auto filtered = FilterDepth(geom, mono).first;
  std::vector<bool> mask(geom.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = geom.IsValidDepth(geom.values()[i]) && !geom.IsValidDepth(filtered.values()[i]);
  }
  return mask;
}

// 8. Transient blob removal and scale invariance.
Outcome DepthFixtures() {
  bool ok = true;
  double worst_outside = 0.0;
  std::size_t missed = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    SynthSpec spec;
    spec.kind = SynthKind::kDepthFixture;
    spec.seed = seed;
    const auto f = GenerateDepthFixture(spec);
    const auto mask = RemovalMask(f.geom, f.mono);
    const std::set<std::size_t> blob(f.blob.begin(), f.blob.end());
    std::size_t outside = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (blob.contains(i)) missed += !mask[i];
      else outside += mask[i];
    }
    const double frac = static_cast<double>(outside) / (mask.size() - blob.size());
    worst_outside = std::max(worst_outside, frac);
    for (float g : {0.1f, 1.0f, 10.0f}) {
      for (float m : {0.3f, 1.0f, 2.7f}) {
        ok &= RemovalMask(f.geom.Scaled(g), f.mono.Scaled(m)) == mask;
      }
    }
  }
  ok &= missed == 0 && worst_outside <= 0.02;
  return {ok, fmt::format("blob pixels missed {}, worst non-blob removal {:.2f}%, scale {}",
                          missed, 100.0 * worst_outside, ok ? "invariant" : "check failed")};
}

// 9. Pose metrics: perfection on identity, invariance under similarity.
Outcome PoseSanity() {
  Rng rng(9);
  const std::vector<double> thresholds = {5, 15, 30};
  const auto random_poses = [&](int n) {
    std::vector<PosedView> views;
    for (int i = 0; i < n; ++i) {
      Eigen::Quaterniond q(rng.Normal(0, 1), rng.Normal(0, 1), rng.Normal(0, 1), rng.Normal(0, 1));
      q.normalize();
      const Eigen::Vector3d c(rng.Normal(0, 3), rng.Normal(0, 3), rng.Normal(0, 3));
      const Eigen::Matrix3d r = q.toRotationMatrix();
      views.push_back(MakePosedView(i + 1, 1, q, -r * c, fmt::format("{}.jpg", i + 1)));
    }
    return views;
  };
  bool identity_ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 8;
    const auto gt = random_poses(n);
    const auto same = ComputePosePairErrors(gt, gt, thresholds);
    identity_ok &= same.rra_at.at(5) == 1.0 && same.rta_at.at(5) == 1.0 &&
                   same.auc_at.at(5) == 1.0 && same.mre == 0.0 && same.mte == 0.0;
    const auto pred = random_poses(n);
    Eigen::Quaterniond q0(rng.Normal(0, 1), rng.Normal(0, 1), rng.Normal(0, 1), rng.Normal(0, 1));
    const Eigen::Matrix3d r0 = q0.normalized().toRotationMatrix();
    const Eigen::Vector3d t0(rng.Normal(0, 10), rng.Normal(0, 10), rng.Normal(0, 10));
    const double s = std::exp(rng.Normal(0, 1));
    auto moved = pred;
    for (auto& v : moved) {
      const Eigen::Matrix3d r = v.RotationMatrix() * r0.transpose();
      v = MakePosedView(v.view_id, 1, Eigen::Quaterniond(r), s * v.translation - r * t0, v.image_name);
    }
    const auto a = ComputePosePairErrors(pred, gt, thresholds);
    const auto b = ComputePosePairErrors(moved, gt, thresholds);
    for (std::size_t i = 0; i < a.rotation_errors.size(); ++i) {
      worst = std::max({worst, std::abs(a.rotation_errors[i] - b.rotation_errors[i]),
                        std::abs(a.translation_errors[i] - b.translation_errors[i])});
    }
  }
  return {identity_ok && worst < 1e-6,
          fmt::format("identity {}, max change under similarity {:.2e} deg",
                      identity_ok ? "perfect" : "imperfect", worst)};
}

// 10. Write -> read -> write is byte-stable.
Outcome FormatRoundTrips() {
  Rng rng(10);
  int bad = 0;
  for (int trial = 0; trial < 25; ++trial) {
    SynthSpec spec;
    spec.cluster_count = 2 + trial % 5;
    spec.cluster_size = 2 + trial % 4;
    spec.seed = trial;
    spec.noise_sigma = 0.5;
    auto scene = GenerateRingScene(spec).scene;
    // Random intrinsics and point colours for wider coverage.
    for (auto& [id, cam] : scene.cameras) {
      for (auto& p : cam.params) p *= 1.0 + rng.UniformReal();
    }
    for (auto& [id, p] : scene.points) {
      p.xyz += Eigen::Vector3d(rng.Normal(0, 1), rng.Normal(0, 1), rng.Normal(0, 1));
      p.error = rng.UniformReal();
      p.color = {std::uint8_t(rng.UniformIndex(256)), std::uint8_t(rng.UniformIndex(256)),
                 std::uint8_t(rng.UniformIndex(256))};
    }
    // Scene text files.
    {
      std::stringstream a, b, c;
      WriteCamerasText(scene, a);
      WriteImagesText(scene, b);
      WritePoints3DText(scene, c);
      SceneReconstruction back = scene;
      back.cameras = ReadCamerasText(a);
      back.views = ReadImagesText(b);
      back.points = ReadPoints3DText(c);
      std::stringstream a2, b2, c2;
      WriteCamerasText(back, a2);
      WriteImagesText(back, b2);
      WritePoints3DText(back, c2);
      bad += a.str() != a2.str() || b.str() != b2.str() || c.str() != c2.str();
    }
    // Matches.
    {
      std::vector<MatchEdge> edges;
      for (int e = 0; e < 40; ++e) {
        ViewId a = 1 + static_cast<ViewId>(rng.UniformIndex(30));
        ViewId b = 1 + static_cast<ViewId>(rng.UniformIndex(30));
        if (a == b) continue;
        edges.push_back({std::min(a, b), std::max(a, b), rng.UniformInt(0, 5000)});
      }
      std::stringstream first;
      WriteMatchGraph(edges, first);
      const auto back = ReadMatchGraph(first);
      std::stringstream second, third;
      WriteMatchGraph(back, second);
      WriteMatchGraph(ReadMatchGraph(second), third);
      bad += second.str() != third.str();
    }
    // PFM.
    {
      DepthMap map(3 + trial, 2 + trial % 7);
      for (auto& v : map.values()) v = rng.UniformReal() < 0.1 ? 0.0f : float(rng.UniformReal() * 50);
      std::stringstream first;
      WritePfm(map, first);
      const std::string bytes = first.str();
      const auto back = ReadPfm(first);
      std::stringstream second;
      WritePfm(back, second);
      bad += bytes != second.str() || !(back == map);
    }
    // Batches.
    {
      const SceneSampler sampler(scene, 50, trial);
      SamplingConfig config;
      config.preset = static_cast<Preset>(trial % 4);
      config.n_views = std::min<int>(6, static_cast<int>(scene.views.size()));
      config.seed = trial;
      const auto batches = sampler.SampleMany(config, 3);
      std::stringstream first;
      WriteBatches(batches, first);
      const std::string bytes = first.str();
      std::stringstream second;
      WriteBatches(ReadBatches(first), second);
      bad += bytes != second.str();
    }
  }
  return {bad == 0, fmt::format("25 randomized fixtures x 4 formats, {} unstable", bad)};
}

// 11. Every subcommand is byte-deterministic.
Outcome CliDeterminism() {
  lt::TempDir dir;
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  int bad = 0;
  const auto twice = [&](std::vector<std::string> args, bool out_is_dir = false) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      auto a = args;
      const auto out = p(fmt::format("{}_{}_{}", args[0], bad, run));
      a.insert(a.end(), {"--quiet", "--out", out});
      const auto r = lt::RunTool(a);
      if (r.code != 0) {
        ++bad;
        return;
      }
      if (out_is_dir) {
        for (const auto& entry : std::filesystem::directory_iterator(out)) {
          outputs[run] += entry.path().filename().string() + lt::ReadFile(entry.path());
        }
      } else {
        outputs[run] = r.out + lt::ReadFile(out);
      }
    }
    bad += outputs[0] != outputs[1] || outputs[0].empty();
  };
  lt::RunTool({"synth", "--kind", "ring", "--seed", "11", "--quiet", "--out", p("scene")});
  lt::RunTool({"synth", "--kind", "depth", "--seed", "11", "--quiet", "--out", p("depth")});
  lt::RunTool({"sample", "--scene", p("scene"), "--matches", p("scene/matches.txt"), "--batches",
               "4", "--quiet", "--out", p("batches.jsonl")});
  const std::vector<std::string> scene = {"--scene", p("scene"), "--matches", p("scene/matches.txt")};
  const auto with = [&](std::string cmd, std::vector<std::string> extra) {
    std::vector<std::string> args = {std::move(cmd)};
    args.insert(args.end(), scene.begin(), scene.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  twice(with("parse", {}), true);
  twice(with("stats", {}));
  twice(with("communities", {"--seed", "3"}));
  twice(with("partition", {"--ncc", "4", "--seed", "3"}));
  twice(with("sample", {"--preset", "sparse", "--n", "24", "--batches", "8", "--seed", "7"}));
  twice(with("coverage", {"--batches", p("batches.jsonl")}));
  twice({"filter-depth", "--geom", p("depth/geom.pfm"), "--mono", p("depth/mono.pfm")});
  twice({"pose-eval", "--pred", p("scene/images.txt"), "--gt", p("scene/images.txt")});
  twice({"synth", "--kind", "grid", "--seed", "5"}, true);
  return {bad == 0, fmt::format("9 subcommands run twice, {} differing", bad)};
}

}  // namespace
}  // namespace longtail

int main() {
  using namespace longtail;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 depth sweep monotonicity", Fig7Monotonicity},
      {"AC2 phase accounting", Fig4Phases},
      {"AC3 component bound", ComponentBound},
      {"AC4 steiner approximation", SteinerBound},
      {"AC5 louvain correctness", LouvainCorrectness},
      {"AC6 greedy step oracle", GreedyOracle},
      {"AC7 partition invariants", PartitionInvariants},
      {"AC8 depth filter fixtures", DepthFixtures},
      {"AC9 pose metric sanity", PoseSanity},
      {"AC10 format round trips", FormatRoundTrips},
      {"AC11 cli determinism", CliDeterminism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("exception: {}", e.what())};
    }
    failed += !outcome.pass;
    fmt::print("{} {}: {}\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail);
  }
  return failed == 0 ? 0 : 1;
}
