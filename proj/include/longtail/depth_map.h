#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace longtail {

// Row-major single-channel depth image, row 0 at the top. A pixel is valid
// iff its value is finite and positive.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  float& at(int x, int y) { return values_[Index(x, y)]; }
  float at(int x, int y) const { return values_[Index(x, y)]; }
  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }

  bool IsValid(int x, int y) const { return IsValidDepth(at(x, y)); }
  std::size_t NumValid() const;

  DepthMap Scaled(float factor) const;

  static bool IsValidDepth(float value);

  bool operator==(const DepthMap&) const = default;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

// Portable float map, single channel ("Pf"). Rows are stored bottom to top;
// a negative scale marks little-endian data. Invalid depths are written as
// 0.0. Both endiannesses are read; writing is always little-endian.
DepthMap ReadPfm(std::istream& stream);
DepthMap ReadPfm(const std::filesystem::path& path);
void WritePfm(const DepthMap& map, std::ostream& stream);
void WritePfm(const DepthMap& map, const std::filesystem::path& path);

}  // namespace longtail
