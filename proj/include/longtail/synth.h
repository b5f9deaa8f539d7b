#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "longtail/community.h"
#include "longtail/depth_map.h"
#include "longtail/scene.h"

namespace longtail {

enum class SynthKind { kRingOfClusters, kGridScene, kDepthFixture };

struct SynthSpec {
  SynthKind kind = SynthKind::kRingOfClusters;
  int cluster_count = 12;
  int cluster_size = 12;
  MatchCount intra_weight = 200;
  MatchCount inter_weight = 60;
  double radius = 20.0;
  double noise_sigma = 0.05;
  std::uint64_t seed = 0;

  // Depth fixture geometry.
  int width = 64;
  int height = 64;
  int blob_width = 12;
  int blob_height = 8;

  // Throws InvalidArgument.
  void Validate() const;
};

struct SynthScene {
  SceneReconstruction scene;
  // Ground-truth cluster (row for grid scenes) of every view.
  CommunityLabels clusters;
};

// Clusters evenly spaced on a circle (cluster k centered at azimuth
// (k + 0.5) * 360 / count around +Y), each a clique at intra_weight, with
// adjacent clusters bridged by one inter_weight edge. Cameras face the ring
// center; their positions carry seeded Gaussian jitter.
SynthScene GenerateRingScene(const SynthSpec& spec);

// cluster_count x cluster_size planar grid of cameras looking down -Y, with
// 4-neighbor edges at intra_weight and diagonal edges at inter_weight.
SynthScene GenerateGridScene(const SynthSpec& spec);

struct DepthFixture {
  DepthMap geom;
  DepthMap mono;
  double mono_scale = 1.0;
  // Row-major pixel indices of the transient blob, sorted.
  std::vector<std::size_t> blob;
};

// Smooth ramp in both maps, the monocular map scaled by a seeded factor in
// [0.3, 3], and a rectangle in the geometric map pulled to half its depth,
// which gives a normalized discrepancy of about 1 after alignment.
DepthFixture GenerateDepthFixture(const SynthSpec& spec);

}  // namespace longtail
