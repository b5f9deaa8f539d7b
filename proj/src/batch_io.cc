#include "longtail/batch_io.h"

#include <fstream>

#include <fmt/format.h>

#include "longtail/errors.h"

namespace longtail {

using nlohmann::json;

json BatchToJson(const SampledBatch& batch) {
  const auto& config = batch.config;
  json record;
  record["scene_id"] = batch.scene_id;
  record["config"] = {
      {"n", config.n_views},
      {"n_cc", config.n_cc},
      {"depth", config.depth},
      {"seed", config.seed},
      {"prune_threshold", config.prune_threshold},
      {"weight_mode", std::string(SteinerWeightName(config.weight_mode))},
      {"preset", config.preset ? json(std::string(PresetName(*config.preset)))
                               : json(nullptr)},
  };
  record["views"] = batch.views;
  json provenance = json::array();
  for (std::size_t i = 0; i < batch.views.size(); ++i) {
    const auto& p = batch.provenance[i];
    provenance.push_back({{"view", batch.views[i]},
                          {"partition", p.partition},
                          {"community", p.community},
                          {"phase", std::string(PhaseName(p.phase))}});
  }
  record["provenance"] = std::move(provenance);
  record["truncated"] = batch.truncated;
  return record;
}

SampledBatch BatchFromJson(const json& record) {
  SampledBatch batch;
  batch.scene_id = record.at("scene_id").get<std::string>();
  const auto& config = record.at("config");
  batch.config.n_views = config.at("n").get<int>();
  batch.config.n_cc = config.at("n_cc").get<int>();
  batch.config.depth = config.at("depth").get<int>();
  batch.config.seed = config.at("seed").get<std::uint64_t>();
  batch.config.prune_threshold = config.value("prune_threshold", kDefaultPruneThreshold);
  batch.config.weight_mode =
      SteinerWeightFromName(config.value("weight_mode", std::string("unit_hop")));
  if (config.contains("preset") && !config.at("preset").is_null()) {
    batch.config.preset = PresetFromName(config.at("preset").get<std::string>());
  }
  batch.views = record.at("views").get<std::vector<ViewId>>();
  const auto& provenance = record.at("provenance");
  if (provenance.size() != batch.views.size()) {
    throw InputError("provenance length does not match views");
  }
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    const auto& p = provenance[i];
    if (p.at("view").get<ViewId>() != batch.views[i]) {
      throw InputError("provenance view order does not match views");
    }
    batch.provenance.push_back({p.at("partition").get<int>(),
                                p.at("community").get<int>(),
                                PhaseFromName(p.at("phase").get<std::string>())});
  }
  batch.truncated = record.value("truncated", false);
  return batch;
}

void WriteBatches(const std::vector<SampledBatch>& batches, std::ostream& stream) {
  for (const auto& batch : batches) stream << BatchToJson(batch).dump() << '\n';
}

void WriteBatches(const std::vector<SampledBatch>& batches,
                  const std::filesystem::path& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  WriteBatches(batches, stream);
  if (!stream) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::vector<SampledBatch> ReadBatches(std::istream& stream) {
  std::vector<SampledBatch> batches;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      batches.push_back(BatchFromJson(json::parse(line)));
    } catch (const json::exception& e) {
      throw MalformedLine(line_no, e.what());
    } catch (const InputError& e) {
      throw MalformedLine(line_no, e.what());
    }
  }
  return batches;
}

std::vector<SampledBatch> ReadBatches(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return ReadBatches(stream);
}

}  // namespace longtail
