// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "occ/accumulate.hpp"
#include "occ/depth.hpp"
#include "occ/manifest.hpp"
#include "occ/metrics.hpp"
#include "occ/synth.hpp"
#include "occ/voxelize.hpp"

namespace occ {

/// Tunable pipeline settings, loadable from a JSON file. Unknown keys are
/// rejected so typos fail loudly instead of silently using defaults.
struct PipelineConfig {
  std::optional<GridSpec> grid;  // overrides the manifest grid when set
  AccumulationConfig accumulation;
  DepthBinning depth_binning;
  int stride = 16;
  int working_width = 704;
  int working_height = 256;
  int threads = 1;
  std::uint64_t seed = 0;
  bool export_ply = false;
};

/// Parses a config JSON file. Throws ConfigError naming any bad field.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Inclusive frame id range filter ("a..b" on the command line).
struct FrameRange {
  int first = 0;
  int last = 0;
  bool contains(int id) const { return id >= first && id <= last; }
};

/// Everything autolabel derives for one key frame.
struct KeyFrameResult {
  int frame_id = 0;
  VoxelHistogramGrid histogram;
  OccupancyGrid occupancy;  // resolved and refined
  VoxelMask observed;
  BinStats bin_stats;
  std::uint64_t unobserved = 0;
};

/// Runs accumulation, carving, resolution and refinement for one key frame.
/// The grid is anchored to the key frame's ego pose.
KeyFrameResult autolabel_key_frame(const SceneManifest& manifest,
                                   int key_frame_id,
                                   const PipelineConfig& config);

struct AutolabelStats {
  std::uint64_t key_frames = 0;
  std::uint64_t points_binned = 0;
  std::uint64_t points_dropped = 0;
  std::uint64_t voxels_unobserved = 0;
  double wall_ms = 0.0;
};

/// Labels every key frame (optionally filtered) with a worker pool of
/// `config.threads` threads and writes occ_<frame>.occg plus
/// observed_<frame>.occm per key frame and a stats.json summary. Outputs do
/// not depend on the thread count. Throws ConfigError when the filter
/// matches no key frame.
AutolabelStats run_autolabel(const SceneManifest& manifest,
                             const PipelineConfig& config,
                             const std::filesystem::path& out_dir,
                             const std::optional<FrameRange>& frames);

/// Compares every prediction grid against the ground-truth grid of the same
/// file name, writes report.json and report.txt to out_dir and returns the
/// report. Throws EvalError when the directories do not pair up.
MetricsReport run_eval(const std::filesystem::path& pred_dir,
                       const std::filesystem::path& gt_dir,
                       const std::optional<std::filesystem::path>& mask_path,
                       const std::filesystem::path& out_dir);

enum class DepthMode { kLidarGt, kPseudo, kRgbd, kBins };

DepthMode depth_mode_from_name(const std::string& name);

/// Produces one depth product for one frame at the working resolution:
///   lidar-gt  depth_<frame>.dpth from the lidar cloud
///   pseudo    pseudo_<frame>.dpth from radar at the configured stride
///   rgbd      rgbd_<frame>.ppm + rgbd_<frame>.dpth (stride 1)
///   bins      bins_<frame>.dbin quantizing the lidar depth map
void run_depth(const SceneManifest& manifest, int frame_id, DepthMode mode,
               const PipelineConfig& config,
               const std::filesystem::path& out_dir);

/// Generates a synthetic scene directory (see generate_scene).
void run_synth(const std::string& scenario_name, std::uint64_t seed,
               const std::filesystem::path& out_dir);

/// Writes the camera frustum mask for the manifest's grid as fovmask.occm.
/// The grid frame is the key-frame ego frame, so the camera extrinsics are
/// the camera pose in the grid frame and one mask serves every frame.
void run_fov_mask(const SceneManifest& manifest, const PipelineConfig& config,
                  const std::filesystem::path& out_dir);

}  // namespace occ
