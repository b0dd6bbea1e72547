// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "occ/geometry.hpp"

namespace occ {

/// One capture in a sequence. Paths are relative to the manifest directory;
/// `ego_pose` maps the ego frame at this timestamp into the world frame.
struct FrameRecord {
  int frame_id = 0;
  double timestamp = 0.0;
  Pose ego_pose;
  std::string lidar_path;
  std::string radar_path;
  std::string image_path;
  bool is_key = false;
};

/// Scene description loaded from manifest.json. Sensor extrinsics map each
/// sensor frame into the ego frame. Intrinsics describe the native rectified
/// camera; callers rescale them for resized images.
struct SceneManifest {
  std::vector<std::string> class_names;
  CameraIntrinsics camera;
  GridSpec grid;
  Pose lidar_to_ego;
  Pose radar_to_ego;
  Pose camera_to_ego;
  std::vector<FrameRecord> frames;
  std::optional<std::uint64_t> seed;
  std::filesystem::path base_dir;

  const FrameRecord* find_frame(int frame_id) const;
  std::vector<int> key_frame_ids() const;
  std::filesystem::path resolve(const std::string& relative) const {
    return base_dir / relative;
  }
};

/// Parses and validates a manifest: 18 class names with "free" last, rigid
/// 4x4 row-major poses, strictly increasing timestamps, unique frame ids.
/// Violations raise FormatError naming the offending field.
SceneManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const SceneManifest& manifest,
                   const std::filesystem::path& path);

}  // namespace occ
