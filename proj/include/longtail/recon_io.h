#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "longtail/scene.h"

namespace longtail {

// COLMAP text-format readers. Comment lines start with '#'. Every parse
// failure is reported as MalformedLine with a 1-based line number.
std::map<CameraId, CameraIntrinsics> ReadCamerasText(std::istream& stream);
std::map<ViewId, PosedView> ReadImagesText(std::istream& stream);
std::map<PointId, SparsePoint> ReadPoints3DText(std::istream& stream);

void WriteCamerasText(const SceneReconstruction& scene, std::ostream& stream);
void WriteImagesText(const SceneReconstruction& scene, std::ostream& stream);
void WritePoints3DText(const SceneReconstruction& scene, std::ostream& stream);

// Reads cameras/images (and optionally points3D) and validates every
// cross-reference. The scene id defaults to the parent directory name of the
// cameras file.
SceneReconstruction ParseReconstruction(
    const std::filesystem::path& cameras_path,
    const std::filesystem::path& images_path,
    const std::optional<std::filesystem::path>& points_path = std::nullopt);

// Reads `dir/cameras.txt`, `dir/images.txt` and `dir/points3D.txt` if present.
SceneReconstruction ReadSceneDir(const std::filesystem::path& dir);
void WriteSceneDir(const SceneReconstruction& scene,
                   const std::filesystem::path& dir);

// Edge list `VIEW_A VIEW_B MATCH_COUNT`. Endpoints are normalized so that
// view_a < view_b and duplicate pairs keep the maximum count. The result is
// sorted by (view_a, view_b).
std::vector<MatchEdge> ReadMatchGraph(std::istream& stream);
std::vector<MatchEdge> ParseMatchGraph(const std::filesystem::path& path);
void WriteMatchGraph(const std::vector<MatchEdge>& edges, std::ostream& stream);
void WriteMatchGraph(const std::vector<MatchEdge>& edges,
                     const std::filesystem::path& path);

// Sets scene.edges after checking that every endpoint is a registered view.
void AttachMatches(SceneReconstruction& scene, std::vector<MatchEdge> edges);

}  // namespace longtail
