#include "longtail/recon_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "longtail/errors.h"

namespace longtail {
namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

std::string_view Trim(std::string_view line) {
  auto tokens_begin = line.find_first_not_of(" \t\r\n");
  if (tokens_begin == std::string_view::npos) return {};
  auto tokens_end = line.find_last_not_of(" \t\r\n");
  return line.substr(tokens_begin, tokens_end - tokens_begin + 1);
}

bool IsSkippable(std::string_view trimmed) {
  return trimmed.empty() || trimmed.front() == '#';
}

template <typename T>
T ParseInteger(std::string_view token, std::size_t line_no, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw MalformedLine(line_no, fmt::format("invalid {} '{}'", what, token));
  }
  return value;
}

double ParseReal(std::string_view token, std::size_t line_no, const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw MalformedLine(line_no, fmt::format("invalid {} '{}'", what, token));
  }
  return value;
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return stream;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return stream;
}

}  // namespace

std::map<CameraId, CameraIntrinsics> ReadCamerasText(std::istream& stream) {
  std::map<CameraId, CameraIntrinsics> cameras;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto trimmed = Trim(line);
    if (IsSkippable(trimmed)) continue;
    const auto tokens = SplitWhitespace(trimmed);
    if (tokens.size() < 4) {
      throw MalformedLine(line_no, "expected CAMERA_ID MODEL WIDTH HEIGHT PARAMS...");
    }
    CameraIntrinsics camera;
    camera.camera_id = ParseInteger<CameraId>(tokens[0], line_no, "camera id");
    const auto model = CameraModelFromName(tokens[1]);
    if (!model) {
      throw MalformedLine(line_no, fmt::format("unsupported camera model '{}'", tokens[1]));
    }
    camera.model = *model;
    camera.width = ParseInteger<int>(tokens[2], line_no, "width");
    camera.height = ParseInteger<int>(tokens[3], line_no, "height");
    for (std::size_t i = 4; i < tokens.size(); ++i) {
      camera.params.push_back(ParseReal(tokens[i], line_no, "camera parameter"));
    }
    try {
      ValidateIntrinsics(camera);
    } catch (const InputError& e) {
      throw MalformedLine(line_no, e.what());
    }
    if (!cameras.emplace(camera.camera_id, camera).second) {
      throw DuplicateId("camera", camera.camera_id, line_no);
    }
  }
  return cameras;
}

std::map<ViewId, PosedView> ReadImagesText(std::istream& stream) {
  std::map<ViewId, PosedView> views;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto trimmed = Trim(line);
    if (IsSkippable(trimmed)) continue;
    const auto tokens = SplitWhitespace(trimmed);
    if (tokens.size() != 10) {
      throw MalformedLine(
          line_no, "expected IMAGE_ID QW QX QY QZ TX TY TZ CAMERA_ID NAME");
    }
    const auto view_id = ParseInteger<ViewId>(tokens[0], line_no, "image id");
    const Eigen::Quaterniond rotation(ParseReal(tokens[1], line_no, "QW"),
                                      ParseReal(tokens[2], line_no, "QX"),
                                      ParseReal(tokens[3], line_no, "QY"),
                                      ParseReal(tokens[4], line_no, "QZ"));
    if (std::abs(rotation.norm() - 1.0) > 1e-6) {
      throw MalformedLine(line_no, "quaternion is not unit length");
    }
    const Eigen::Vector3d translation(ParseReal(tokens[5], line_no, "TX"),
                                      ParseReal(tokens[6], line_no, "TY"),
                                      ParseReal(tokens[7], line_no, "TZ"));
    const auto camera_id = ParseInteger<CameraId>(tokens[8], line_no, "camera id");
    auto view = MakePosedView(view_id, camera_id, rotation, translation,
                              std::string(tokens[9]));
    if (!views.emplace(view_id, std::move(view)).second) {
      throw DuplicateId("image", view_id, line_no);
    }
    // The 2D observation line always follows the pose line, possibly empty.
    if (std::getline(stream, line)) ++line_no;
  }
  return views;
}

std::map<PointId, SparsePoint> ReadPoints3DText(std::istream& stream) {
  std::map<PointId, SparsePoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto trimmed = Trim(line);
    if (IsSkippable(trimmed)) continue;
    const auto tokens = SplitWhitespace(trimmed);
    if (tokens.size() < 8 || (tokens.size() - 8) % 2 != 0) {
      throw MalformedLine(
          line_no, "expected POINT3D_ID X Y Z R G B ERROR (IMAGE_ID POINT2D_IDX)...");
    }
    SparsePoint point;
    point.point_id = ParseInteger<PointId>(tokens[0], line_no, "point id");
    point.xyz = Eigen::Vector3d(ParseReal(tokens[1], line_no, "X"),
                                ParseReal(tokens[2], line_no, "Y"),
                                ParseReal(tokens[3], line_no, "Z"));
    for (int c = 0; c < 3; ++c) {
      point.color[c] = ParseInteger<std::uint8_t>(tokens[4 + c], line_no, "color");
    }
    point.error = ParseReal(tokens[7], line_no, "error");
    for (std::size_t i = 8; i < tokens.size(); i += 2) {
      point.track.push_back(
          {ParseInteger<ViewId>(tokens[i], line_no, "track image id"),
           ParseInteger<std::uint32_t>(tokens[i + 1], line_no, "track point2D index")});
    }
    const PointId id = point.point_id;
    if (!points.emplace(id, std::move(point)).second) {
      throw DuplicateId("point", id, line_no);
    }
  }
  return points;
}

void WriteCamerasText(const SceneReconstruction& scene, std::ostream& stream) {
  fmt::print(stream, "# Camera list with one line of data per camera:\n");
  fmt::print(stream, "#   CAMERA_ID, MODEL, WIDTH, HEIGHT, PARAMS[]\n");
  fmt::print(stream, "# Number of cameras: {}\n", scene.cameras.size());
  for (const auto& [id, camera] : scene.cameras) {
    fmt::print(stream, "{} {} {} {}", id, CameraModelName(camera.model),
               camera.width, camera.height);
    for (double p : camera.params) fmt::print(stream, " {}", p);
    fmt::print(stream, "\n");
  }
}

void WriteImagesText(const SceneReconstruction& scene, std::ostream& stream) {
  fmt::print(stream, "# Image list with two lines of data per image:\n");
  fmt::print(stream, "#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n");
  fmt::print(stream, "#   POINTS2D[] as (X, Y, POINT3D_ID)\n");
  fmt::print(stream, "# Number of images: {}\n", scene.views.size());
  for (const auto& [id, view] : scene.views) {
    const auto& q = view.rotation;
    const auto& t = view.translation;
    fmt::print(stream, "{} {} {} {} {} {} {} {} {} {}\n\n", id, q.w(), q.x(),
               q.y(), q.z(), t.x(), t.y(), t.z(), view.camera_id,
               view.image_name);
  }
}

void WritePoints3DText(const SceneReconstruction& scene, std::ostream& stream) {
  fmt::print(stream, "# 3D point list with one line of data per point:\n");
  fmt::print(stream,
             "#   POINT3D_ID, X, Y, Z, R, G, B, ERROR, TRACK[] as (IMAGE_ID, "
             "POINT2D_IDX)\n");
  fmt::print(stream, "# Number of points: {}\n", scene.points.size());
  for (const auto& [id, point] : scene.points) {
    fmt::print(stream, "{} {} {} {} {} {} {} {}", id, point.xyz.x(),
               point.xyz.y(), point.xyz.z(), point.color[0], point.color[1],
               point.color[2], point.error);
    for (const auto& element : point.track) {
      fmt::print(stream, " {} {}", element.view_id, element.point2d_idx);
    }
    fmt::print(stream, "\n");
  }
}

SceneReconstruction ParseReconstruction(
    const std::filesystem::path& cameras_path,
    const std::filesystem::path& images_path,
    const std::optional<std::filesystem::path>& points_path) {
  SceneReconstruction scene;
  scene.scene_id =
      std::filesystem::absolute(cameras_path).parent_path().filename().string();
  {
    auto stream = OpenInput(cameras_path);
    scene.cameras = ReadCamerasText(stream);
  }
  {
    auto stream = OpenInput(images_path);
    scene.views = ReadImagesText(stream);
  }
  if (points_path) {
    auto stream = OpenInput(*points_path);
    scene.points = ReadPoints3DText(stream);
  }
  scene.Validate();
  return scene;
}

SceneReconstruction ReadSceneDir(const std::filesystem::path& dir) {
  const auto points = dir / "points3D.txt";
  std::optional<std::filesystem::path> points_path;
  if (std::filesystem::exists(points)) points_path = points;
  auto scene = ParseReconstruction(dir / "cameras.txt", dir / "images.txt", points_path);
  return scene;
}

void WriteSceneDir(const SceneReconstruction& scene,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto stream = OpenOutput(dir / "cameras.txt");
    WriteCamerasText(scene, stream);
  }
  {
    auto stream = OpenOutput(dir / "images.txt");
    WriteImagesText(scene, stream);
  }
  if (!scene.points.empty()) {
    auto stream = OpenOutput(dir / "points3D.txt");
    WritePoints3DText(scene, stream);
  }
}

std::vector<MatchEdge> ReadMatchGraph(std::istream& stream) {
  std::map<std::pair<ViewId, ViewId>, MatchCount> merged;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto trimmed = Trim(line);
    if (IsSkippable(trimmed)) continue;
    const auto tokens = SplitWhitespace(trimmed);
    if (tokens.size() != 3) {
      throw MalformedLine(line_no, "expected VIEW_A VIEW_B MATCH_COUNT");
    }
    auto a = ParseInteger<ViewId>(tokens[0], line_no, "view id");
    auto b = ParseInteger<ViewId>(tokens[1], line_no, "view id");
    const auto count = ParseInteger<MatchCount>(tokens[2], line_no, "match count");
    if (count < 0) throw MalformedLine(line_no, "negative match count");
    if (a == b) throw SelfLoop(a, line_no);
    if (a > b) std::swap(a, b);
    auto [it, inserted] = merged.emplace(std::make_pair(a, b), count);
    if (!inserted) it->second = std::max(it->second, count);
  }
  std::vector<MatchEdge> edges;
  edges.reserve(merged.size());
  for (const auto& [pair, count] : merged) {
    edges.push_back({pair.first, pair.second, count});
  }
  return edges;
}

std::vector<MatchEdge> ParseMatchGraph(const std::filesystem::path& path) {
  auto stream = OpenInput(path);
  return ReadMatchGraph(stream);
}

void WriteMatchGraph(const std::vector<MatchEdge>& edges, std::ostream& stream) {
  for (const auto& edge : edges) {
    fmt::print(stream, "{} {} {}\n", edge.view_a, edge.view_b, edge.match_count);
  }
}

void WriteMatchGraph(const std::vector<MatchEdge>& edges,
                     const std::filesystem::path& path) {
  auto stream = OpenOutput(path);
  WriteMatchGraph(edges, stream);
}

void AttachMatches(SceneReconstruction& scene, std::vector<MatchEdge> edges) {
  for (const auto& edge : edges) {
    if (!scene.views.contains(edge.view_a)) throw DanglingReference("view", edge.view_a);
    if (!scene.views.contains(edge.view_b)) throw DanglingReference("view", edge.view_b);
  }
  scene.edges = std::move(edges);
}

}  // namespace longtail
