#include "longtail/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "longtail/batch_io.h"
#include "longtail/community.h"
#include "longtail/depth_filter.h"
#include "longtail/errors.h"
#include "longtail/execution.h"
#include "longtail/metrics.h"
#include "longtail/partition.h"
#include "longtail/random.h"
#include "longtail/recon_io.h"
#include "longtail/sampler.h"
#include "longtail/synth.h"
#include "longtail/view_graph.h"

namespace longtail {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kFormatsHelp = R"(File formats:
  cameras.txt   CAMERA_ID MODEL WIDTH HEIGHT PARAMS...   (COLMAP text, '#' comments)
  images.txt    IMAGE_ID QW QX QY QZ TX TY TZ CAMERA_ID NAME, then one 2D point line
  points3D.txt  POINT3D_ID X Y Z R G B ERROR (IMAGE_ID POINT2D_IDX)...
  matches.txt   VIEW_A VIEW_B MATCH_COUNT
  batches.jsonl one JSON batch record per line
  *.pfm         single-channel little-endian portable float map, invalid = 0)";

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;
  std::string out;
};

class Logger {
 public:
  explicit Logger(const GlobalOptions& options) : quiet_(options.quiet) {}

  template <typename... Args>
  void Info(fmt::format_string<Args...> format, Args&&... args) const {
    if (!quiet_) fmt::print(std::cerr, "{}\n", fmt::format(format, std::forward<Args>(args)...));
  }

 private:
  bool quiet_;
};

struct SceneInput {
  std::string scene_dir;
  std::string matches;
  MatchCount prune = kDefaultPruneThreshold;
};

SceneReconstruction LoadScene(const SceneInput& input) {
  auto scene = ReadSceneDir(input.scene_dir);
  if (!input.matches.empty()) AttachMatches(scene, ParseMatchGraph(input.matches));
  return scene;
}

// Writes `text` to --out, or stdout when --out is empty.
void Emit(const GlobalOptions& options, const std::string& text) {
  if (options.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream stream(options.out, std::ios::binary);
  if (!stream) throw IoError(fmt::format("cannot open '{}' for writing", options.out));
  stream << text;
}

void RequireOut(const GlobalOptions& options, const char* what) {
  if (options.out.empty()) {
    throw InvalidArgument(fmt::format("--out is required: {}", what));
  }
}

std::vector<int> AggregateKeys() { return {0, 1, 2, 3}; }

}  // namespace

int RunCli(const std::vector<std::string>& args) {
  GlobalOptions global;
  SceneInput scene_input;

  CLI::App app{"Long-tail view sampling and depth refinement toolkit"};
  app.footer(kFormatsHelp);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", global.seed, "Seed for every randomized step (default 0)");
  app.add_option("--threads", global.threads, "Maximum worker threads");
  app.add_flag("--quiet", global.quiet, "Suppress log output");
  app.add_option("--out", global.out, "Output path");

  const auto add_scene_options = [&](CLI::App* sub, bool require_matches) {
    sub->add_option("--scene", scene_input.scene_dir,
                    "Directory with cameras.txt, images.txt [, points3D.txt]")
        ->required();
    auto* matches = sub->add_option("--matches", scene_input.matches,
                                    "Match graph edge list");
    if (require_matches) matches->required();
    sub->add_option("--prune", scene_input.prune, "Drop edges with fewer matches (default 50)");
  };

  // parse
  auto* parse = app.add_subcommand("parse", "Validate a scene and optionally re-serialize it");
  add_scene_options(parse, false);

  // stats
  auto* stats = app.add_subcommand("stats", "View-graph statistics report");
  add_scene_options(stats, true);

  // communities
  double resolution = 1.0;
  auto* communities = app.add_subcommand("communities", "Louvain communities as VIEW_ID COMMUNITY_ID");
  add_scene_options(communities, true);
  communities->add_option("--resolution", resolution, "Modularity resolution (default 1)");

  // partition
  int partition_ncc = 1;
  auto* partition = app.add_subcommand("partition", "Round-robin BFS partition as VIEW_ID PART");
  add_scene_options(partition, true);
  partition->add_option("--ncc", partition_ncc, "Number of parts")->required();

  // sample
  SamplingConfig sampling;
  std::string preset_name;
  std::string weight_mode = "unit_hop";
  std::size_t batch_count = 1;
  int dfs_k = 0;
  auto* sample = app.add_subcommand("sample", "Generate sampled batches (batches.jsonl)");
  add_scene_options(sample, true);
  sample->add_option("--n", sampling.n_views, "Views per batch (default 24)");
  sample->add_option("--ncc", sampling.n_cc, "Maximum connected components (default 1)");
  sample->add_option("--depth", sampling.depth, "Greedy search depth D (default 24)");
  sample->add_option("--preset", preset_name, "dense | sparse | mixed | random")
      ->check(CLI::IsMember({"dense", "sparse", "mixed", "random"}));
  sample->add_option("--batches", batch_count, "Number of batches (default 1)");
  sample->add_option("--weight-mode", weight_mode, "unit_hop | inverse_match")
      ->check(CLI::IsMember({"unit_hop", "inverse_match"}));
  sample->add_option("--dfs-k", dfs_k, "DFS-subsample every batch to k views");

  // coverage
  std::string batches_path;
  auto* coverage = app.add_subcommand("coverage", "Coverage and dispersion of sampled batches");
  add_scene_options(coverage, true);
  coverage->add_option("--batches", batches_path, "batches.jsonl to evaluate")->required();

  // filter-depth
  std::string geom_path, mono_path, report_path;
  FilterConfig filter_config;
  auto* filter = app.add_subcommand("filter-depth", "Monocular-guided depth map filtering");
  filter->add_option("--geom", geom_path, "Geometric (MVS) depth map, PFM")->required();
  filter->add_option("--mono", mono_path, "Monocular depth prior, PFM")->required();
  filter->add_option("--tau-depth", filter_config.tau_depth, "Depth discrepancy threshold (default 0.25)");
  filter->add_option("--tau-grad", filter_config.tau_grad, "Gradient discrepancy threshold (default 0.10)");
  filter->add_option("--report", report_path, "Write the filter report as JSON");

  // pose-eval
  std::string pred_path, gt_path;
  std::vector<double> thresholds = {5.0, 15.0, 30.0};
  auto* pose = app.add_subcommand("pose-eval", "Pairwise RRA / RTA / AUC pose errors");
  pose->add_option("--pred", pred_path, "Predicted poses (images.txt format)")->required();
  pose->add_option("--gt", gt_path, "Reference poses (images.txt format)")->required();
  pose->add_option("--thresholds", thresholds, "Thresholds in degrees")->delimiter(',');

  // synth
  SynthSpec synth_spec;
  std::string synth_kind = "ring";
  auto* synth = app.add_subcommand("synth", "Write a synthetic scene or depth fixture");
  synth->add_option("--kind", synth_kind, "ring | grid | depth")
      ->check(CLI::IsMember({"ring", "grid", "depth"}));
  synth->add_option("--clusters", synth_spec.cluster_count, "Clusters (grid rows)");
  synth->add_option("--cluster-size", synth_spec.cluster_size, "Cameras per cluster (grid columns)");
  synth->add_option("--intra", synth_spec.intra_weight, "Match count inside clusters");
  synth->add_option("--inter", synth_spec.inter_weight, "Match count of bridges");
  synth->add_option("--radius", synth_spec.radius, "Ring radius / grid extent");
  synth->add_option("--noise", synth_spec.noise_sigma, "Position jitter sigma");
  synth->add_option("--width", synth_spec.width, "Depth fixture width");
  synth->add_option("--height", synth_spec.height, "Depth fixture height");
  synth->add_option("--blob-width", synth_spec.blob_width, "Transient blob width");
  synth->add_option("--blob-height", synth_spec.blob_height, "Transient blob height");

  for (auto* sub : app.get_subcommands({})) sub->footer(kFormatsHelp);

  std::vector<const char*> argv;
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help(e.get_name().empty() ? "" : "", CLI::AppFormatMode::Normal);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return kExitOk;
    }
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInputError;
  }

  const Logger log(global);
  SetThreadCount(global.threads);
  log.Info("seed = {}", global.seed);

  try {
    if (parse->parsed()) {
      const auto scene = LoadScene(scene_input);
      if (!global.out.empty()) {
        WriteSceneDir(scene, global.out);
        if (!scene_input.matches.empty()) {
          WriteMatchGraph(scene.edges, fs::path(global.out) / "matches.txt");
        }
      }
      fmt::print(std::cout, "scene_id = {}\ncameras = {}\nviews = {}\npoints = {}\nedges = {}\n",
                 scene.scene_id, scene.cameras.size(), scene.views.size(),
                 scene.points.size(), scene.edges.size());
    } else if (stats->parsed()) {
      const auto scene = LoadScene(scene_input);
      const auto graph = PruneEdges(BuildGraph(scene), scene_input.prune);
      Emit(global, FormatStatsReport(ComputeStats(graph)));
    } else if (communities->parsed()) {
      const auto scene = LoadScene(scene_input);
      const auto graph = PruneEdges(BuildGraph(scene), scene_input.prune);
      LouvainOptions options;
      options.resolution = resolution;
      const auto assignment = Louvain(graph, global.seed, options);
      log.Info("communities = {}, modularity = {}, levels = {}",
               assignment.NumCommunities(), assignment.modularity,
               assignment.level_count);
      std::string text;
      for (const auto& [id, label] : assignment.labels) text += fmt::format("{} {}\n", id, label);
      Emit(global, text);
    } else if (partition->parsed()) {
      const auto scene = LoadScene(scene_input);
      const auto graph = PruneEdges(BuildGraph(scene), scene_input.prune);
      const auto assignment = Louvain(graph, global.seed);
      const auto parts = PartitionRoundRobin(graph, partition_ncc, global.seed, assignment);
      log.Info("unassigned views = {}", graph.NumNodes() - parts.assignment.size());
      std::string text;
      for (const auto& [id, part] : parts.assignment) text += fmt::format("{} {}\n", id, part);
      Emit(global, text);
    } else if (sample->parsed()) {
      RequireOut(global, "sample writes batches.jsonl");
      const auto scene = LoadScene(scene_input);
      sampling.seed = global.seed;
      sampling.prune_threshold = scene_input.prune;
      sampling.weight_mode = SteinerWeightFromName(weight_mode);
      if (!preset_name.empty()) sampling.preset = PresetFromName(preset_name);
      sampling.Resolved().Validate();
      const SceneSampler sampler(scene, scene_input.prune, global.seed);
      log.Info("communities = {}", sampler.Communities().NumCommunities());
      auto batches = sampler.SampleMany(sampling, batch_count);
      std::size_t truncated = 0;
      for (std::size_t b = 0; b < batches.size(); ++b) {
        truncated += batches[b].truncated ? 1 : 0;
        if (dfs_k > 0) {
          const int k = std::min<int>(dfs_k, static_cast<int>(batches[b].views.size()));
          batches[b] = DfsSubsample(batches[b], sampler.Graph(), k,
                                    MixSeed(batches[b].config.seed, 0xDF5));
        }
      }
      if (truncated > 0) {
        log.Info("warning: InsufficientViews in {} of {} batches", truncated, batches.size());
      }
      WriteBatches(batches, fs::path(global.out));
    } else if (coverage->parsed()) {
      const auto scene = LoadScene(scene_input);
      const auto graph = PruneEdges(BuildGraph(scene), scene_input.prune);
      const auto positions = scene.Positions();
      const auto batches = ReadBatches(fs::path(batches_path));
      std::string text;
      const auto keys = AggregateKeys();
      std::map<int, double> mean_cov;
      double mean_near = 0.0, mean_graph = 0.0, mean_euclid = 0.0;
      for (std::size_t b = 0; b < batches.size(); ++b) {
        const auto report = ComputeCoverage(graph, positions, batches[b].views, keys);
        json record;
        record["batch"] = b;
        record["num_views"] = batches[b].views.size();
        record["components"] = CountInducedComponents(graph, batches[b].views);
        json cov;
        for (const auto& [k, v] : report.k_hop_coverage) {
          cov[std::to_string(k)] = v;
          mean_cov[k] += v;
        }
        record["k_hop_coverage"] = cov;
        record["avg_nearest_sample_dist"] = report.avg_nearest_sample_dist;
        record["graph_dispersion"] = report.graph_dispersion;
        record["euclidean_dispersion"] = report.euclidean_dispersion;
        record["disconnected_pairs"] = report.disconnected_pairs;
        mean_near += report.avg_nearest_sample_dist;
        mean_graph += report.graph_dispersion;
        mean_euclid += report.euclidean_dispersion;
        text += record.dump() + "\n";
      }
      if (!batches.empty()) {
        const double n = static_cast<double>(batches.size());
        json aggregate;
        aggregate["aggregate"] = true;
        aggregate["batches"] = batches.size();
        json cov;
        for (const auto& [k, v] : mean_cov) cov[std::to_string(k)] = v / n;
        aggregate["k_hop_coverage"] = cov;
        aggregate["avg_nearest_sample_dist"] = mean_near / n;
        aggregate["graph_dispersion"] = mean_graph / n;
        aggregate["euclidean_dispersion"] = mean_euclid / n;
        text += aggregate.dump() + "\n";
      }
      Emit(global, text);
    } else if (filter->parsed()) {
      RequireOut(global, "filter-depth writes the filtered PFM");
      const auto geom = ReadPfm(fs::path(geom_path));
      const auto mono = ReadPfm(fs::path(mono_path));
      const auto [filtered, report] = FilterDepth(geom, mono, filter_config);
      WritePfm(filtered, fs::path(global.out));
      json record = {{"scale_s", report.scale_s},
                     {"removed_by_depth", report.removed_by_depth},
                     {"removed_by_grad", report.removed_by_grad},
                     {"removed_total", report.removed_total},
                     {"kept", report.kept},
                     {"tau_depth", filter_config.tau_depth},
                     {"tau_grad", filter_config.tau_grad}};
      if (!report_path.empty()) {
        std::ofstream stream(report_path, std::ios::binary);
        if (!stream) throw IoError(fmt::format("cannot open '{}' for writing", report_path));
        stream << record.dump(2) << "\n";
      }
      log.Info("kept {} / removed {} pixels", report.kept, report.removed_total);
    } else if (pose->parsed()) {
      const auto read_views = [](const std::string& path) {
        std::ifstream stream(path);
        if (!stream) throw IoError(fmt::format("cannot open '{}' for reading", path));
        std::vector<PosedView> views;
        for (auto& [id, view] : ReadImagesText(stream)) views.push_back(view);
        return views;
      };
      const auto pred = read_views(pred_path);
      const auto gt = read_views(gt_path);
      const auto errors = ComputePosePairErrors(pred, gt, thresholds);
      json record;
      record["pairs"] = errors.rotation_errors.size();
      record["mre"] = errors.mre;
      record["mte"] = errors.mte;
      for (double t : thresholds) {
        const auto key = fmt::format("{}", t);
        record["rra"][key] = errors.rra_at.at(t);
        record["rta"][key] = errors.rta_at.at(t);
        record["auc"][key] = errors.auc_at.at(t);
      }
      Emit(global, record.dump(2) + "\n");
    } else if (synth->parsed()) {
      RequireOut(global, "synth writes into a directory");
      synth_spec.seed = global.seed;
      const fs::path dir(global.out);
      fs::create_directories(dir);
      if (synth_kind == "depth") {
        synth_spec.kind = SynthKind::kDepthFixture;
        const auto fixture = GenerateDepthFixture(synth_spec);
        WritePfm(fixture.geom, dir / "geom.pfm");
        WritePfm(fixture.mono, dir / "mono.pfm");
        std::ofstream blob(dir / "blob.txt", std::ios::binary);
        for (auto index : fixture.blob) blob << index << "\n";
      } else {
        synth_spec.kind = synth_kind == "ring" ? SynthKind::kRingOfClusters : SynthKind::kGridScene;
        auto generated = synth_kind == "ring" ? GenerateRingScene(synth_spec)
                                              : GenerateGridScene(synth_spec);
        WriteSceneDir(generated.scene, dir);
        WriteMatchGraph(generated.scene.edges, dir / "matches.txt");
        std::ofstream clusters(dir / "clusters.txt", std::ios::binary);
        for (const auto& [id, label] : generated.clusters) clusters << id << ' ' << label << "\n";
      }
      log.Info("wrote {}", dir.string());
    }
  } catch (const InvariantViolation& e) {
    fmt::print(std::cerr, "internal error: {}\n", e.what());
    return kExitInternalError;
  } catch (const InputError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "internal error: {}\n", e.what());
    return kExitInternalError;
  }
  return kExitOk;
}

}  // namespace longtail
