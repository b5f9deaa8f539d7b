#include "longtail/depth_map.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "longtail/errors.h"

namespace longtail {
namespace {

std::uint32_t ByteSwap(std::uint32_t v) {
  return ((v & 0x000000FFu) << 24) | ((v & 0x0000FF00u) << 8) |
         ((v & 0x00FF0000u) >> 8) | ((v & 0xFF000000u) >> 24);
}

float DecodeFloat(const unsigned char* bytes, bool little_endian) {
  std::uint32_t raw;
  std::memcpy(&raw, bytes, sizeof(raw));
  const bool host_little = std::endian::native == std::endian::little;
  if (host_little != little_endian) raw = ByteSwap(raw);
  return std::bit_cast<float>(raw);
}

void EncodeLittleEndian(float value, unsigned char* bytes) {
  std::uint32_t raw = std::bit_cast<std::uint32_t>(value);
  if (std::endian::native != std::endian::little) raw = ByteSwap(raw);
  std::memcpy(bytes, &raw, sizeof(raw));
}

// Reads one whitespace-delimited header token; PFM headers end with a single
// whitespace byte before the raster.
std::string HeaderToken(std::istream& stream) {
  std::string token;
  int c = stream.get();
  while (c != EOF && std::isspace(c)) c = stream.get();
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = stream.get();
  }
  return token;
}

}  // namespace

DepthMap::DepthMap(int width, int height, float fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument(fmt::format("invalid depth map size {}x{}", width, height));
  }
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

bool DepthMap::IsValidDepth(float value) {
  return std::isfinite(value) && value > 0.0f;
}

std::size_t DepthMap::NumValid() const {
  std::size_t count = 0;
  for (float v : values_) count += IsValidDepth(v) ? 1 : 0;
  return count;
}

DepthMap DepthMap::Scaled(float factor) const {
  DepthMap scaled = *this;
  for (float& v : scaled.values_) v *= factor;
  return scaled;
}

DepthMap ReadPfm(std::istream& stream) {
  const auto magic = HeaderToken(stream);
  if (magic == "PF") throw InputError("PFM: three-channel maps are not depth maps");
  if (magic != "Pf") throw InputError("PFM: missing 'Pf' header");
  int width = 0;
  int height = 0;
  double scale = 0.0;
  try {
    width = std::stoi(HeaderToken(stream));
    height = std::stoi(HeaderToken(stream));
    scale = std::stod(HeaderToken(stream));
  } catch (const std::exception&) {
    throw InputError("PFM: malformed header");
  }
  if (width <= 0 || height <= 0) throw InputError("PFM: invalid dimensions");
  if (scale == 0.0) throw InputError("PFM: zero scale");
  const bool little_endian = scale < 0.0;

  DepthMap map(width, height);
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 4);
  for (int r = 0; r < height; ++r) {
    if (!stream.read(reinterpret_cast<char*>(row.data()),
                     static_cast<std::streamsize>(row.size()))) {
      throw InputError("PFM: truncated raster");
    }
    const int y = height - 1 - r;
    for (int x = 0; x < width; ++x) {
      map.at(x, y) = DecodeFloat(&row[static_cast<std::size_t>(x) * 4], little_endian);
    }
  }
  return map;
}

DepthMap ReadPfm(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return ReadPfm(stream);
}

void WritePfm(const DepthMap& map, std::ostream& stream) {
  stream << "Pf\n" << map.width() << ' ' << map.height() << "\n-1.0\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(map.width()) * 4);
  for (int y = map.height() - 1; y >= 0; --y) {
    for (int x = 0; x < map.width(); ++x) {
      const float v = map.at(x, y);
      EncodeLittleEndian(DepthMap::IsValidDepth(v) ? v : 0.0f,
                         &row[static_cast<std::size_t>(x) * 4]);
    }
    stream.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size()));
  }
}

void WritePfm(const DepthMap& map, const std::filesystem::path& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  WritePfm(map, stream);
  if (!stream) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace longtail
