#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "longtail/execution.h"
#include "longtail/scene.h"
#include "longtail/view_graph.h"

namespace longtail {

// Fraction of graph nodes within k hops of a sampled node.
double KHopCoverage(const ViewGraph& graph, std::span<const ViewId> sampled, int k);

// Mean over `nodes` of the Euclidean distance to the closest sampled camera.
double AvgNearestSampleDist(const PositionMap& positions,
                            std::span<const ViewId> nodes,
                            std::span<const ViewId> sampled,
                            Execution execution = Execution::kParallel);

struct Dispersion {
  // Mean hop distance over connected pairs.
  double graph = 0.0;
  // Mean Euclidean distance over all pairs.
  double euclidean = 0.0;
  // Pairs without a path in the graph, left out of `graph`.
  std::size_t disconnected_pairs = 0;
};

// Average pairwise distances among sampled views. Throws InvalidArgument
// (TooFewSamples) for fewer than two views.
Dispersion ComputeDispersion(const ViewGraph& graph, const PositionMap& positions,
                             std::span<const ViewId> sampled,
                             Execution execution = Execution::kParallel);

struct CoverageReport {
  std::map<int, double> k_hop_coverage;
  double avg_nearest_sample_dist = 0.0;
  double graph_dispersion = 0.0;
  double euclidean_dispersion = 0.0;
  std::size_t disconnected_pairs = 0;
};

CoverageReport ComputeCoverage(const ViewGraph& graph, const PositionMap& positions,
                               std::span<const ViewId> sampled,
                               std::span<const int> ks = std::array{0, 1, 2, 3},
                               Execution execution = Execution::kParallel);

inline constexpr int kAzimuthBins = 36;

enum class UpAxis { kX, kY, kZ };

struct AzimuthCoverage {
  int bin_count = kAzimuthBins;
  std::array<bool, kAzimuthBins> positional_bins{};
  std::array<bool, kAzimuthBins> rotational_bins{};
  double positional_pct = 0.0;
  double rotational_pct = 0.0;
};

// Bin of an azimuth in degrees; intervals are [10 i, 10 (i + 1)).
int AzimuthBin(double degrees);

// Azimuth in [0, 360) of a direction projected onto the plane orthogonal to
// `up`, or a negative value when the projection is shorter than 1e-9.
double HorizontalAzimuth(const Eigen::Vector3d& direction, UpAxis up = UpAxis::kY);

// Positional coverage bins camera centers around the sparse point centroid;
// rotational coverage bins viewing directions. Throws InputError (NoCameras,
// NoPoints).
AzimuthCoverage ComputeAzimuthCoverage(const SceneReconstruction& scene,
                                       UpAxis up = UpAxis::kY);

struct PosePairErrors {
  std::vector<double> rotation_errors;     // degrees, one per unordered pair
  std::vector<double> translation_errors;  // degrees
  std::map<double, double> rra_at;
  std::map<double, double> rta_at;
  std::map<double, double> auc_at;
  double mre = 0.0;
  double mte = 0.0;
};

// Angle in degrees of the rotation taking `a` to `b`.
double RotationAngleDeg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);
// Angle in degrees between two directions; 0 if both are zero, 90 if only
// one is.
double DirectionAngleDeg(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

// Pairwise relative pose errors between id-aligned predicted and reference
// views. RRA/RTA@t count pairs with error below t; AUC@t integrates the
// accuracy curve of max(rotation, translation) error over [0, t] with 1
// degree trapezoids, normalized by t.
PosePairErrors ComputePosePairErrors(std::span<const PosedView> predicted,
                                     std::span<const PosedView> reference,
                                     std::span<const double> thresholds);

}  // namespace longtail
