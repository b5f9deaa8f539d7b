#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace longtail {

using ViewId = std::uint32_t;
using CameraId = std::uint32_t;
using PointId = std::uint64_t;
using MatchCount = std::int64_t;

using PositionMap = std::unordered_map<ViewId, Eigen::Vector3d>;

enum class CameraModel { kSimplePinhole, kPinhole, kSimpleRadial, kRadial, kOpenCV };

std::string_view CameraModelName(CameraModel model);
std::optional<CameraModel> CameraModelFromName(std::string_view name);
std::size_t CameraModelNumParams(CameraModel model);
// Indices of the focal length parameters within `params`.
std::vector<std::size_t> CameraModelFocalIdxs(CameraModel model);

struct CameraIntrinsics {
  CameraId camera_id = 0;
  CameraModel model = CameraModel::kPinhole;
  int width = 0;
  int height = 0;
  std::vector<double> params;

  bool operator==(const CameraIntrinsics&) const = default;
};

// World-to-camera pose, COLMAP convention: x_cam = R * x_world + t.
struct PosedView {
  ViewId view_id = 0;
  CameraId camera_id = 0;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  // Camera center in world coordinates, -R^T t.
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  std::string image_name;

  Eigen::Matrix3d RotationMatrix() const;
  // Camera optical axis expressed in world coordinates (third row of R).
  Eigen::Vector3d ViewingDirection() const;
  void UpdatePosition();
};

PosedView MakePosedView(ViewId view_id, CameraId camera_id,
                        const Eigen::Quaterniond& rotation,
                        const Eigen::Vector3d& translation,
                        std::string image_name);

// Undirected match edge, normalized so that view_a < view_b.
struct MatchEdge {
  ViewId view_a = 0;
  ViewId view_b = 0;
  MatchCount match_count = 0;

  bool operator==(const MatchEdge&) const = default;
};

struct TrackElement {
  ViewId view_id = 0;
  std::uint32_t point2d_idx = 0;

  bool operator==(const TrackElement&) const = default;
};

struct SparsePoint {
  PointId point_id = 0;
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  std::array<std::uint8_t, 3> color = {0, 0, 0};
  double error = 0.0;
  std::vector<TrackElement> track;
};

struct SceneReconstruction {
  std::string scene_id;
  std::map<CameraId, CameraIntrinsics> cameras;
  std::map<ViewId, PosedView> views;
  std::vector<MatchEdge> edges;
  std::map<PointId, SparsePoint> points;

  // Mean of the sparse point cloud; absent when there are no points.
  std::optional<Eigen::Vector3d> Centroid() const;
  PositionMap Positions() const;
  std::vector<ViewId> ViewIds() const;

  // Throws DanglingReference / InputError when a cross-reference is broken.
  void Validate() const;
};

void ValidateIntrinsics(const CameraIntrinsics& camera);

}  // namespace longtail
