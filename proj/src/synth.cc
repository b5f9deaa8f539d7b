#include "longtail/synth.h"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "longtail/errors.h"
#include "longtail/random.h"

namespace longtail {
namespace {

// World-to-camera rotation of a camera at `center` whose optical axis points
// along `forward`, with image "down" roughly along -up.
Eigen::Quaterniond LookRotation(const Eigen::Vector3d& forward,
                                const Eigen::Vector3d& up) {
  const Eigen::Vector3d z = forward.normalized();
  Eigen::Vector3d x = (-up).cross(z);
  if (x.norm() < 1e-12) x = Eigen::Vector3d::UnitX().cross(z);
  x.normalize();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d r;
  r.row(0) = x.transpose();
  r.row(1) = y.transpose();
  r.row(2) = z.transpose();
  Eigen::Quaterniond q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

PosedView CameraAt(ViewId id, const Eigen::Vector3d& center,
                   const Eigen::Quaterniond& rotation) {
  const Eigen::Vector3d t = -(rotation.toRotationMatrix() * center);
  return MakePosedView(id, 1, rotation, t, fmt::format("view_{:05d}.jpg", id));
}

CameraIntrinsics DefaultCamera() {
  return CameraIntrinsics{1, CameraModel::kPinhole, 1024, 768, {900.0, 900.0, 512.0, 384.0}};
}

void AddSymmetricPoints(SceneReconstruction& scene, double extent,
                        const std::vector<ViewId>& observers) {
  // Points symmetric about the origin keep the centroid exactly at zero.
  PointId id = 1;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) {
        SparsePoint point;
        point.point_id = id++;
        point.xyz = Eigen::Vector3d(sx, sy, sz) * extent;
        point.color = {128, 128, 128};
        point.error = 0.5;
        for (std::size_t k = 0; k < observers.size(); ++k) {
          point.track.push_back({observers[k], static_cast<std::uint32_t>(point.point_id)});
        }
        scene.points.emplace(point.point_id, std::move(point));
      }
    }
  }
}

}  // namespace

void SynthSpec::Validate() const {
  if (cluster_count < 1 || cluster_size < 1) {
    throw InvalidArgument("InvalidSpec: cluster_count and cluster_size must be >= 1");
  }
  if (intra_weight < inter_weight) {
    throw InvalidArgument("InvalidSpec: intra_weight must be >= inter_weight");
  }
  if (inter_weight < 0) throw InvalidArgument("InvalidSpec: negative weight");
  if (!(radius > 0.0) || noise_sigma < 0.0) {
    throw InvalidArgument("InvalidSpec: radius must be > 0 and noise_sigma >= 0");
  }
  if (kind == SynthKind::kDepthFixture) {
    if (width < 2 || height < 2) throw InvalidArgument("InvalidSpec: depth map too small");
    if (blob_width < 0 || blob_height < 0 || blob_width > width - 4 ||
        blob_height > height - 4) {
      throw InvalidArgument("InvalidSpec: blob must fit inside the map with a margin");
    }
  }
}

SynthScene GenerateRingScene(const SynthSpec& spec) {
  spec.Validate();
  if (spec.kind != SynthKind::kRingOfClusters) {
    throw InvalidArgument("InvalidSpec: expected a ring-of-clusters spec");
  }
  SynthScene out;
  auto& scene = out.scene;
  scene.scene_id = fmt::format("ring_{}x{}_s{}", spec.cluster_count,
                               spec.cluster_size, spec.seed);
  scene.cameras.emplace(1, DefaultCamera());
  Rng rng(spec.seed);
  const double step = 2.0 * std::numbers::pi / spec.cluster_count;
  // Cameras of one cluster spread over half of the cluster's angular slot.
  const double spread = 0.5 * step / spec.cluster_size;
  const Eigen::Vector3d up = Eigen::Vector3d::UnitY();
  std::vector<std::vector<ViewId>> clusters(spec.cluster_count);
  ViewId next_id = 1;
  for (int k = 0; k < spec.cluster_count; ++k) {
    const double center_angle = (k + 0.5) * step;
    for (int j = 0; j < spec.cluster_size; ++j) {
      const double angle = center_angle + (j - 0.5 * (spec.cluster_size - 1)) * spread;
      // Azimuth measured from +Z toward +X.
      Eigen::Vector3d center(spec.radius * std::sin(angle), 0.0,
                             spec.radius * std::cos(angle));
      center += Eigen::Vector3d(rng.Normal(0.0, spec.noise_sigma),
                                rng.Normal(0.0, spec.noise_sigma),
                                rng.Normal(0.0, spec.noise_sigma));
      const auto rotation = LookRotation(-center, up);
      scene.views.emplace(next_id, CameraAt(next_id, center, rotation));
      clusters[k].push_back(next_id);
      out.clusters.emplace(next_id, k);
      ++next_id;
    }
  }
  for (int k = 0; k < spec.cluster_count; ++k) {
    const auto& members = clusters[k];
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        scene.edges.push_back({members[a], members[b], spec.intra_weight});
      }
    }
  }
  if (spec.cluster_count >= 2) {
    const int bridges = spec.cluster_count == 2 ? 1 : spec.cluster_count;
    for (int k = 0; k < bridges; ++k) {
      const auto& from = clusters[k];
      const auto& to = clusters[(k + 1) % spec.cluster_count];
      ViewId a = from.back();
      ViewId b = to.front();
      if (a > b) std::swap(a, b);
      scene.edges.push_back({a, b, spec.inter_weight});
    }
  }
  std::sort(scene.edges.begin(), scene.edges.end(), [](const auto& x, const auto& y) {
    return std::tie(x.view_a, x.view_b) < std::tie(y.view_a, y.view_b);
  });
  AddSymmetricPoints(scene, 0.25 * spec.radius, {1});
  scene.Validate();
  return out;
}

SynthScene GenerateGridScene(const SynthSpec& spec) {
  spec.Validate();
  if (spec.kind != SynthKind::kGridScene) {
    throw InvalidArgument("InvalidSpec: expected a grid spec");
  }
  SynthScene out;
  auto& scene = out.scene;
  scene.scene_id = fmt::format("grid_{}x{}_s{}", spec.cluster_count,
                               spec.cluster_size, spec.seed);
  scene.cameras.emplace(1, DefaultCamera());
  Rng rng(spec.seed);
  const int rows = spec.cluster_count;
  const int cols = spec.cluster_size;
  const double spacing = spec.radius / std::max(1, std::max(rows, cols) - 1);
  const auto id_of = [cols](int r, int c) { return static_cast<ViewId>(r * cols + c + 1); };
  const auto down = LookRotation(-Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Eigen::Vector3d center(c * spacing, 10.0, r * spacing);
      center += Eigen::Vector3d(rng.Normal(0.0, spec.noise_sigma), 0.0,
                                rng.Normal(0.0, spec.noise_sigma));
      const ViewId id = id_of(r, c);
      scene.views.emplace(id, CameraAt(id, center, down));
      out.clusters.emplace(id, r);
    }
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) scene.edges.push_back({id_of(r, c), id_of(r, c + 1), spec.intra_weight});
      if (r + 1 < rows) scene.edges.push_back({id_of(r, c), id_of(r + 1, c), spec.intra_weight});
      if (r + 1 < rows && c + 1 < cols) {
        scene.edges.push_back({id_of(r, c), id_of(r + 1, c + 1), spec.inter_weight});
      }
      if (r + 1 < rows && c > 0) {
        scene.edges.push_back({id_of(r, c), id_of(r + 1, c - 1), spec.inter_weight});
      }
    }
  }
  std::sort(scene.edges.begin(), scene.edges.end(), [](const auto& x, const auto& y) {
    return std::tie(x.view_a, x.view_b) < std::tie(y.view_a, y.view_b);
  });
  AddSymmetricPoints(scene, 0.5 * spec.radius, {1});
  scene.Validate();
  return out;
}

DepthFixture GenerateDepthFixture(const SynthSpec& spec) {
  spec.Validate();
  if (spec.kind != SynthKind::kDepthFixture) {
    throw InvalidArgument("InvalidSpec: expected a depth fixture spec");
  }
  DepthFixture fixture;
  Rng rng(spec.seed);
  // Log-uniform in [0.3, 3].
  fixture.mono_scale = 0.3 * std::pow(10.0, rng.UniformReal());
  fixture.geom = DepthMap(spec.width, spec.height);
  fixture.mono = DepthMap(spec.width, spec.height);
  const int bx0 = (spec.width - spec.blob_width) / 2;
  const int by0 = (spec.height - spec.blob_height) / 2;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const double ramp = 5.0 + 0.05 * x + 0.03 * y;
      const bool in_blob = x >= bx0 && x < bx0 + spec.blob_width && y >= by0 &&
                           y < by0 + spec.blob_height;
      fixture.geom.at(x, y) = static_cast<float>(in_blob ? 0.5 * ramp : ramp);
      fixture.mono.at(x, y) = static_cast<float>(fixture.mono_scale * ramp);
      if (in_blob) {
        fixture.blob.push_back(static_cast<std::size_t>(y) * spec.width + x);
      }
    }
  }
  return fixture;
}

}  // namespace longtail
