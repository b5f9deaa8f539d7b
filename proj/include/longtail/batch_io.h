#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "longtail/sampler.h"

namespace longtail {

// One JSON object per line:
//   {"config": {...}, "provenance": [{"community", "partition", "phase",
//    "view"}...], "scene_id": "...", "truncated": false, "views": [...]}
nlohmann::json BatchToJson(const SampledBatch& batch);
SampledBatch BatchFromJson(const nlohmann::json& record);

void WriteBatches(const std::vector<SampledBatch>& batches, std::ostream& stream);
void WriteBatches(const std::vector<SampledBatch>& batches,
                  const std::filesystem::path& path);
std::vector<SampledBatch> ReadBatches(std::istream& stream);
std::vector<SampledBatch> ReadBatches(const std::filesystem::path& path);

}  // namespace longtail
