// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/accumulate.hpp"

#include <algorithm>

#include "occ/cloud_io.hpp"
#include "occ/errors.hpp"
#include "occ/motion.hpp"

namespace occ {

std::pair<LabeledCloud, LabeledCloud> split_dynamic(
    const LabeledCloud& cloud, const AccumulationConfig& config) {
  LabeledCloud dynamic;
  LabeledCloud still;
  for (const auto& p : cloud) {
    if (config.dynamic_classes.count(p.label) > 0) {
      dynamic.push_back(p);
    } else {
      still.push_back(p);
    }
  }
  return {std::move(dynamic), std::move(still)};
}

namespace {

// Sensor pose in the world at the given sweep progress, interpolated between
// this frame's ego pose and the next one. The last frame holds its pose.
Pose sensor_pose_at(const SceneManifest& manifest, std::size_t frame_index,
                    double offset_seconds) {
  const FrameRecord& frame = manifest.frames[frame_index];
  if (offset_seconds <= 0.0 || frame_index + 1 >= manifest.frames.size()) {
    return frame.ego_pose * manifest.lidar_to_ego;
  }
  const FrameRecord& next = manifest.frames[frame_index + 1];
  const double gap = next.timestamp - frame.timestamp;
  const Pose ego = interpolate_pose(frame.ego_pose, next.ego_pose,
                                    offset_seconds / gap);
  return ego * manifest.lidar_to_ego;
}

}  // namespace

AssembledScene assemble_scene(const SceneManifest& manifest, int key_frame_id,
                              const AccumulationConfig& config) {
  std::size_t key_index = manifest.frames.size();
  for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
    if (manifest.frames[i].frame_id == key_frame_id) {
      key_index = i;
      break;
    }
  }
  if (key_index == manifest.frames.size()) {
    throw FormatError("assemble_scene: manifest has no frame with id " +
                      std::to_string(key_frame_id));
  }

  const std::size_t first =
      key_index >= static_cast<std::size_t>(config.window)
          ? key_index - static_cast<std::size_t>(config.window)
          : 0;
  const std::size_t last = std::min(
      manifest.frames.size() - 1,
      key_index + static_cast<std::size_t>(config.window));

  const Pose key_from_world =
      manifest.frames[key_index].ego_pose.inverse();

  AssembledScene scene;
  for (std::size_t i = first; i <= last; ++i) {
    const FrameRecord& frame = manifest.frames[i];
    LabeledCloud cloud;
    try {
      cloud = read_lidar_cloud(manifest.resolve(frame.lidar_path));
    } catch (const FormatError& e) {
      throw FormatError("assemble_scene: frame " +
                        std::to_string(frame.frame_id) + ": " + e.what());
    }

    float max_offset = 0.0f;
    for (const auto& p : cloud) {
      max_offset = std::max(max_offset, p.t_offset);
    }
    if (max_offset > 0.0f) {
      const Pose start = sensor_pose_at(manifest, i, 0.0);
      const Pose end =
          sensor_pose_at(manifest, i, static_cast<double>(max_offset));
      cloud = compensate_ego_motion(cloud, start, end,
                                    static_cast<double>(max_offset), 0.0);
    }

    if (i != key_index) {
      cloud = split_dynamic(cloud, config).second;
    }

    const Pose world_from_sensor = frame.ego_pose * manifest.lidar_to_ego;
    const Pose key_from_sensor = key_from_world * world_from_sensor;

    FrameContribution contrib;
    contrib.frame_id = frame.frame_id;
    contrib.sensor_origin = key_from_sensor.translation;
    contrib.begin = scene.points.size();
    for (const auto& p : cloud) {
      AssembledPoint ap;
      ap.position = key_from_sensor.apply(p.position());
      ap.label = p.label;
      scene.points.push_back(ap);
    }
    contrib.end = scene.points.size();
    scene.frames.push_back(contrib);
  }
  return scene;
}

}  // namespace occ
