#include "longtail/scene.h"

#include <cmath>

#include <fmt/format.h>

#include "longtail/errors.h"

namespace longtail {
namespace {

struct ModelInfo {
  CameraModel model;
  std::string_view name;
  std::size_t num_params;
  std::vector<std::size_t> focal_idxs;
};

const std::vector<ModelInfo>& ModelTable() {
  static const std::vector<ModelInfo> table = {
      {CameraModel::kSimplePinhole, "SIMPLE_PINHOLE", 3, {0}},
      {CameraModel::kPinhole, "PINHOLE", 4, {0, 1}},
      {CameraModel::kSimpleRadial, "SIMPLE_RADIAL", 4, {0}},
      {CameraModel::kRadial, "RADIAL", 5, {0}},
      {CameraModel::kOpenCV, "OPENCV", 8, {0, 1}},
  };
  return table;
}

const ModelInfo& Info(CameraModel model) {
  for (const auto& info : ModelTable()) {
    if (info.model == model) return info;
  }
  throw InvariantViolation("unknown camera model");
}

}  // namespace

std::string_view CameraModelName(CameraModel model) { return Info(model).name; }

std::optional<CameraModel> CameraModelFromName(std::string_view name) {
  for (const auto& info : ModelTable()) {
    if (info.name == name) return info.model;
  }
  return std::nullopt;
}

std::size_t CameraModelNumParams(CameraModel model) {
  return Info(model).num_params;
}

std::vector<std::size_t> CameraModelFocalIdxs(CameraModel model) {
  return Info(model).focal_idxs;
}

void ValidateIntrinsics(const CameraIntrinsics& camera) {
  if (camera.width <= 0 || camera.height <= 0) {
    throw InputError(fmt::format("camera {}: non-positive image size {}x{}",
                                 camera.camera_id, camera.width,
                                 camera.height));
  }
  if (camera.params.size() != CameraModelNumParams(camera.model)) {
    throw InputError(fmt::format(
        "camera {}: model {} expects {} params, got {}", camera.camera_id,
        CameraModelName(camera.model), CameraModelNumParams(camera.model),
        camera.params.size()));
  }
  for (std::size_t idx : CameraModelFocalIdxs(camera.model)) {
    if (!(camera.params[idx] > 0.0)) {
      throw InputError(fmt::format("camera {}: focal length must be positive",
                                   camera.camera_id));
    }
  }
}

Eigen::Matrix3d PosedView::RotationMatrix() const {
  return rotation.normalized().toRotationMatrix();
}

Eigen::Vector3d PosedView::ViewingDirection() const {
  return RotationMatrix().row(2).transpose();
}

void PosedView::UpdatePosition() {
  position = -RotationMatrix().transpose() * translation;
}

PosedView MakePosedView(ViewId view_id, CameraId camera_id,
                        const Eigen::Quaterniond& rotation,
                        const Eigen::Vector3d& translation,
                        std::string image_name) {
  PosedView view;
  view.view_id = view_id;
  view.camera_id = camera_id;
  view.rotation = rotation;
  view.translation = translation;
  view.image_name = std::move(image_name);
  view.UpdatePosition();
  return view;
}

std::optional<Eigen::Vector3d> SceneReconstruction::Centroid() const {
  if (points.empty()) return std::nullopt;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& [id, point] : points) sum += point.xyz;
  return sum / static_cast<double>(points.size());
}

PositionMap SceneReconstruction::Positions() const {
  PositionMap positions;
  positions.reserve(views.size());
  for (const auto& [id, view] : views) positions.emplace(id, view.position);
  return positions;
}

std::vector<ViewId> SceneReconstruction::ViewIds() const {
  std::vector<ViewId> ids;
  ids.reserve(views.size());
  for (const auto& [id, view] : views) ids.push_back(id);
  return ids;
}

void SceneReconstruction::Validate() const {
  for (const auto& [id, camera] : cameras) ValidateIntrinsics(camera);
  for (const auto& [id, view] : views) {
    if (!cameras.contains(view.camera_id)) {
      throw DanglingReference("camera", view.camera_id);
    }
    if (std::abs(view.rotation.norm() - 1.0) > 1e-6) {
      throw InputError(fmt::format("view {}: quaternion is not unit length", id));
    }
  }
  for (const auto& edge : edges) {
    if (edge.view_a == edge.view_b) throw SelfLoop(edge.view_a, 0);
    if (!views.contains(edge.view_a)) throw DanglingReference("view", edge.view_a);
    if (!views.contains(edge.view_b)) throw DanglingReference("view", edge.view_b);
  }
  for (const auto& [id, point] : points) {
    for (const auto& element : point.track) {
      if (!views.contains(element.view_id)) {
        throw DanglingReference("view", element.view_id);
      }
    }
  }
}

}  // namespace longtail
