#include "longtail/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "longtail/errors.h"

namespace longtail {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void CheckSample(std::span<const ViewId> sampled) {
  if (sampled.empty()) throw InvalidArgument("EmptySample: no sampled views");
}

const Eigen::Vector3d& PositionOf(const PositionMap& positions, ViewId id) {
  auto it = positions.find(id);
  if (it == positions.end()) {
    throw InvalidArgument(fmt::format("no camera position for view {}", id));
  }
  return it->second;
}

std::vector<std::uint32_t> SampleIndices(const ViewGraph& graph,
                                         std::span<const ViewId> sampled) {
  std::vector<std::uint32_t> indices;
  indices.reserve(sampled.size());
  for (ViewId id : sampled) indices.push_back(graph.IndexOf(id));
  return indices;
}

// Relative motion from view i to view j: R_ij = R_j R_i^T, t_ij = t_j - R_ij t_i.
std::pair<Eigen::Matrix3d, Eigen::Vector3d> RelativePose(const PosedView& i,
                                                         const PosedView& j) {
  const Eigen::Matrix3d ri = i.RotationMatrix();
  const Eigen::Matrix3d rj = j.RotationMatrix();
  const Eigen::Matrix3d rij = rj * ri.transpose();
  return {rij, j.translation - rij * i.translation};
}

}  // namespace

double KHopCoverage(const ViewGraph& graph, std::span<const ViewId> sampled, int k) {
  CheckSample(sampled);
  if (k < 0) throw InvalidArgument("k must be >= 0");
  const auto hops = MultiSourceBfs(graph, SampleIndices(graph, sampled), k);
  const auto reached = std::count_if(hops.begin(), hops.end(), [](int d) { return d >= 0; });
  return static_cast<double>(reached) / static_cast<double>(graph.NumNodes());
}

double AvgNearestSampleDist(const PositionMap& positions,
                            std::span<const ViewId> nodes,
                            std::span<const ViewId> sampled,
                            Execution execution) {
  CheckSample(sampled);
  if (nodes.empty()) return 0.0;
  std::vector<Eigen::Vector3d> sample_positions;
  for (ViewId id : sampled) sample_positions.push_back(PositionOf(positions, id));
  std::vector<double> nearest(nodes.size());
  const auto compute = [&](std::size_t i) {
    const auto& p = PositionOf(positions, nodes[i]);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : sample_positions) best = std::min(best, (p - q).norm());
    nearest[i] = best;
  };
  if (execution == Execution::kSerial) {
    for (std::size_t i = 0; i < nodes.size(); ++i) compute(i);
  } else {
    const auto n = static_cast<std::int64_t>(nodes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) compute(static_cast<std::size_t>(i));
  }
  double sum = 0.0;
  for (double d : nearest) sum += d;
  return sum / static_cast<double>(nodes.size());
}

Dispersion ComputeDispersion(const ViewGraph& graph, const PositionMap& positions,
                             std::span<const ViewId> sampled, Execution execution) {
  if (sampled.size() < 2) {
    throw InvalidArgument("TooFewSamples: dispersion needs at least two views");
  }
  const auto indices = SampleIndices(graph, sampled);
  const auto n = sampled.size();
  // Per-source partial sums, reduced in source order afterwards so both
  // execution paths add in the same order.
  std::vector<double> hop_sum(n, 0.0);
  std::vector<double> euclid_sum(n, 0.0);
  std::vector<std::size_t> connected(n, 0);
  const auto from_source = [&](std::size_t i) {
    const auto hops = MultiSourceBfs(graph, std::span(&indices[i], 1));
    const auto& pi = PositionOf(positions, sampled[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      euclid_sum[i] += (pi - PositionOf(positions, sampled[j])).norm();
      const int d = hops[indices[j]];
      if (d >= 0) {
        hop_sum[i] += d;
        ++connected[i];
      }
    }
  };
  if (execution == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) from_source(i);
  } else {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) from_source(static_cast<std::size_t>(i));
  }
  double hops = 0.0;
  double euclid = 0.0;
  std::size_t connected_pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    hops += hop_sum[i];
    euclid += euclid_sum[i];
    connected_pairs += connected[i];
  }
  Dispersion result;
  const double ordered_pairs = static_cast<double>(n * (n - 1));
  result.euclidean = euclid / ordered_pairs;
  result.graph = connected_pairs > 0 ? hops / static_cast<double>(connected_pairs) : 0.0;
  result.disconnected_pairs = (n * (n - 1) - connected_pairs) / 2;
  return result;
}

CoverageReport ComputeCoverage(const ViewGraph& graph, const PositionMap& positions,
                               std::span<const ViewId> sampled,
                               std::span<const int> ks, Execution execution) {
  CoverageReport report;
  for (int k : ks) report.k_hop_coverage[k] = KHopCoverage(graph, sampled, k);
  report.avg_nearest_sample_dist =
      AvgNearestSampleDist(positions, graph.Nodes(), sampled, execution);
  if (sampled.size() >= 2) {
    const auto dispersion = ComputeDispersion(graph, positions, sampled, execution);
    report.graph_dispersion = dispersion.graph;
    report.euclidean_dispersion = dispersion.euclidean;
    report.disconnected_pairs = dispersion.disconnected_pairs;
  }
  return report;
}

int AzimuthBin(double degrees) {
  double wrapped = std::fmod(degrees, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  if (wrapped >= 360.0) wrapped = 0.0;
  const int bin = static_cast<int>(std::floor(wrapped / 10.0));
  return std::clamp(bin, 0, kAzimuthBins - 1);
}

double HorizontalAzimuth(const Eigen::Vector3d& direction, UpAxis up) {
  // Right-handed (first, second) axes of the horizontal plane.
  double a = 0.0;
  double b = 0.0;
  switch (up) {
    case UpAxis::kX: a = direction.y(); b = direction.z(); break;
    case UpAxis::kY: a = direction.z(); b = direction.x(); break;
    case UpAxis::kZ: a = direction.x(); b = direction.y(); break;
  }
  if (std::hypot(a, b) < 1e-9) return -1.0;
  double degrees = std::atan2(b, a) * kRadToDeg;
  if (degrees < 0.0) degrees += 360.0;
  if (degrees >= 360.0) degrees -= 360.0;
  return degrees;
}

AzimuthCoverage ComputeAzimuthCoverage(const SceneReconstruction& scene, UpAxis up) {
  if (scene.views.empty()) throw InputError("NoCameras: scene has no cameras");
  const auto centroid = scene.Centroid();
  if (!centroid) throw InputError("NoPoints: positional coverage needs sparse points");
  AzimuthCoverage coverage;
  for (const auto& [id, view] : scene.views) {
    const double positional = HorizontalAzimuth(view.position - *centroid, up);
    if (positional >= 0.0) coverage.positional_bins[AzimuthBin(positional)] = true;
    const double rotational = HorizontalAzimuth(view.ViewingDirection(), up);
    if (rotational >= 0.0) coverage.rotational_bins[AzimuthBin(rotational)] = true;
  }
  const auto pct = [](const std::array<bool, kAzimuthBins>& bins) {
    return static_cast<double>(std::count(bins.begin(), bins.end(), true)) / kAzimuthBins;
  };
  coverage.positional_pct = pct(coverage.positional_bins);
  coverage.rotational_pct = pct(coverage.rotational_bins);
  return coverage;
}

double RotationAngleDeg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  // ||A - B||_F = 2 sqrt(2) sin(theta / 2); exact zero for identical inputs
  // and well conditioned for small angles.
  const double chord = (a - b).norm() / (2.0 * std::sqrt(2.0));
  return 2.0 * std::asin(std::min(1.0, chord)) * kRadToDeg;
}

double DirectionAngleDeg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double na = a.norm();
  const double nb = b.norm();
  const bool za = na == 0.0;
  const bool zb = nb == 0.0;
  if (za && zb) return 0.0;
  if (za || zb) return 90.0;
  const double chord = (a / na - b / nb).norm() / 2.0;
  return 2.0 * std::asin(std::min(1.0, chord)) * kRadToDeg;
}

PosePairErrors ComputePosePairErrors(std::span<const PosedView> predicted,
                                     std::span<const PosedView> reference,
                                     std::span<const double> thresholds) {
  if (predicted.size() != reference.size()) {
    throw InvalidArgument(fmt::format("LengthMismatch: {} predicted vs {} reference poses",
                                      predicted.size(), reference.size()));
  }
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].view_id != reference[i].view_id) {
      throw InvalidArgument(fmt::format("IdMismatch at position {}: {} vs {}", i,
                                        predicted[i].view_id, reference[i].view_id));
    }
  }
  if (predicted.size() < 2) throw InvalidArgument("pose evaluation needs at least two views");

  PosePairErrors errors;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = i + 1; j < predicted.size(); ++j) {
      const auto [r_pred, t_pred] = RelativePose(predicted[i], predicted[j]);
      const auto [r_ref, t_ref] = RelativePose(reference[i], reference[j]);
      errors.rotation_errors.push_back(RotationAngleDeg(r_pred, r_ref));
      errors.translation_errors.push_back(DirectionAngleDeg(t_pred, t_ref));
    }
  }
  const auto pairs = static_cast<double>(errors.rotation_errors.size());
  const auto fraction_below = [&](const std::vector<double>& values, double t) {
    return static_cast<double>(std::count_if(values.begin(), values.end(),
                                             [t](double e) { return e < t; })) /
           pairs;
  };
  std::vector<double> joint(errors.rotation_errors.size());
  for (std::size_t p = 0; p < joint.size(); ++p) {
    joint[p] = std::max(errors.rotation_errors[p], errors.translation_errors[p]);
  }
  const auto accuracy = [&](double x) {
    return static_cast<double>(std::count_if(joint.begin(), joint.end(),
                                             [x](double e) { return e <= x; })) /
           pairs;
  };
  for (double t : thresholds) {
    if (!(t > 0.0)) throw InvalidArgument("thresholds must be positive");
    errors.rra_at[t] = fraction_below(errors.rotation_errors, t);
    errors.rta_at[t] = fraction_below(errors.translation_errors, t);
    // Trapezoids on the 1 degree grid 0, 1, ..., floor(t) plus a final
    // partial step to t.
    double area = 0.0;
    double x = 0.0;
    double fx = accuracy(0.0);
    while (x < t) {
      const double next = std::min(t, x + 1.0);
      const double fnext = accuracy(next);
      area += 0.5 * (fx + fnext) * (next - x);
      x = next;
      fx = fnext;
    }
    errors.auc_at[t] = area / t;
  }
  for (double e : errors.rotation_errors) errors.mre += e;
  for (double e : errors.translation_errors) errors.mte += e;
  errors.mre /= pairs;
  errors.mte /= pairs;
  return errors;
}

}  // namespace longtail
