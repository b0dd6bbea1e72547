// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "occ/errors.hpp"
#include "occ/manifest.hpp"
#include "occ/pipeline.hpp"
#include "occ/synth.hpp"

namespace {

occ::FrameRange parse_frame_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int only = std::stoi(text);
      return occ::FrameRange{only, only};
    }
    const int first = std::stoi(text.substr(0, dots));
    const int last = std::stoi(text.substr(dots + 2));
    if (last < first) {
      throw occ::ConfigError("--frames range '" + text + "' is reversed");
    }
    return occ::FrameRange{first, last};
  } catch (const occ::ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw occ::ConfigError("--frames expects 'a..b', got '" + text + "'");
  }
}

occ::PipelineConfig config_for(const std::string& config_path, int threads,
                               std::optional<std::uint64_t> seed) {
  occ::PipelineConfig config;
  if (!config_path.empty()) {
    config = occ::load_pipeline_config(config_path);
  }
  if (threads > 0) {
    config.threads = threads;
  }
  if (seed) {
    config.seed = *seed;
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occkit: occupancy ground-truth and radar fusion toolkit"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string config_path;
  std::string out_dir;
  std::string frames_text;
  std::string mask_path;
  std::string mode_name = "lidar-gt";
  std::string scenario;
  std::string pred_dir;
  std::string gt_dir;
  int frame_id = -1;
  int threads = 0;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  auto* autolabel = app.add_subcommand(
      "autolabel", "Generate occupancy labels for every key frame");
  autolabel->add_option("--manifest", manifest_path, "Scene manifest JSON")
      ->required();
  autolabel->add_option("--config", config_path, "Pipeline config JSON");
  autolabel->add_option("--out", out_dir, "Output directory")->required();
  autolabel->add_option("--frames", frames_text,
                        "Key-frame id range a..b (inclusive)");
  autolabel->add_option("--threads", threads, "Worker threads");

  auto* eval = app.add_subcommand("eval", "Score predictions against labels");
  eval->add_option("pred", pred_dir, "Directory of predicted .occg grids")
      ->required();
  eval->add_option("gt", gt_dir, "Directory of ground-truth .occg grids")
      ->required();
  eval->add_option("--mask", mask_path, "Optional .occm evaluation mask");
  eval->add_option("--out", out_dir, "Output directory")->required();

  auto* depth = app.add_subcommand(
      "depth", "Produce depth, pseudo-depth, RGB-D, or depth-bin files");
  depth->add_option("--manifest", manifest_path, "Scene manifest JSON")
      ->required();
  depth->add_option("--config", config_path, "Pipeline config JSON");
  depth->add_option("--frame", frame_id, "Frame id")->required();
  depth
      ->add_option("--mode", mode_name,
                   "One of lidar-gt, pseudo, rgbd, bins")
      ->required();
  depth->add_option("--out", out_dir, "Output directory")->required();

  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic scene with analytic ground truth");
  synth
      ->add_option("scenario", scenario,
                   "static-street, moving-box, or crossing-pedestrian")
      ->required();
  synth->add_option("--seed", seed_value, "Radar sampling seed");
  synth->add_option("--out", out_dir, "Output directory")->required();

  auto* fov = app.add_subcommand(
      "fov-mask", "Write the camera frustum visibility mask for a scene");
  fov->add_option("--manifest", manifest_path, "Scene manifest JSON")
      ->required();
  fov->add_option("--config", config_path, "Pipeline config JSON");
  fov->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  seed_given = synth->count("--seed") > 0;

  try {
    if (*autolabel) {
      const occ::SceneManifest manifest = occ::load_manifest(manifest_path);
      const occ::PipelineConfig config =
          config_for(config_path, threads, std::nullopt);
      std::optional<occ::FrameRange> range;
      if (!frames_text.empty()) {
        range = parse_frame_range(frames_text);
      }
      const occ::AutolabelStats stats =
          occ::run_autolabel(manifest, config, out_dir, range);
      std::fprintf(stderr,
                   "autolabel: %zu key frames, %llu points binned, "
                   "%llu dropped, %llu voxels unobserved, %.1f ms\n",
                   stats.key_frames,
                   static_cast<unsigned long long>(stats.points_binned),
                   static_cast<unsigned long long>(stats.points_dropped),
                   static_cast<unsigned long long>(stats.voxels_unobserved),
                   stats.wall_ms);
    } else if (*eval) {
      std::optional<std::filesystem::path> mask;
      if (!mask_path.empty()) {
        mask = mask_path;
      }
      const occ::MetricsReport report =
          occ::run_eval(pred_dir, gt_dir, mask, out_dir);
      std::fprintf(stderr, "eval: %llu voxels compared\n",
                   static_cast<unsigned long long>(report.voxels_compared));
    } else if (*depth) {
      const occ::SceneManifest manifest = occ::load_manifest(manifest_path);
      const occ::PipelineConfig config =
          config_for(config_path, 0, std::nullopt);
      occ::run_depth(manifest, frame_id, occ::depth_mode_from_name(mode_name),
                     config, out_dir);
      std::fprintf(stderr, "depth: frame %d mode %s written\n", frame_id,
                   mode_name.c_str());
    } else if (*synth) {
      occ::run_synth(scenario, seed_given ? seed_value : 0, out_dir);
      std::fprintf(stderr, "synth: scenario %s written\n", scenario.c_str());
    } else if (*fov) {
      const occ::SceneManifest manifest = occ::load_manifest(manifest_path);
      const occ::PipelineConfig config =
          config_for(config_path, 0, std::nullopt);
      occ::run_fov_mask(manifest, config, out_dir);
      std::fprintf(stderr, "fov-mask: written\n");
    }
  } catch (const occ::FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return 2;
  } catch (const occ::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const occ::EvalError& e) {
    std::fprintf(stderr, "eval error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
