// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/motion.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace occ {

LabeledCloud compensate_ego_motion(const LabeledCloud& cloud,
                                   const Pose& pose_start,
                                   const Pose& pose_end, double sweep_duration,
                                   double reference_time) {
  if (!pose_start.is_rigid() || !pose_end.is_rigid()) {
    throw std::invalid_argument(
        "compensate_ego_motion: sweep poses must be rigid");
  }
  if (!(sweep_duration > 0.0)) {
    throw std::invalid_argument(
        "compensate_ego_motion: sweep_duration must be positive");
  }
  if (reference_time < 0.0 || reference_time > sweep_duration) {
    throw std::invalid_argument(
        "compensate_ego_motion: reference_time outside the sweep");
  }

  const double s_ref = reference_time / sweep_duration;
  const Pose world_from_ref = interpolate_pose(pose_start, pose_end, s_ref);
  const Pose ref_from_world = world_from_ref.inverse();

  // Sweeps quantize t_offset to a handful of values (the container stores
  // 0.1 ms steps), so interpolated poses are cached per distinct offset.
  std::map<float, Pose> ref_from_sweep;

  LabeledCloud out;
  out.reserve(cloud.size());
  // Offsets are floats quantized to 0.1 ms container steps, so a point at
  // the exact sweep end can sit an ulp past the double duration. Half a step
  // of slack admits those; anything further out is bad data.
  constexpr double kOffsetSlack = 5e-5;
  for (const auto& p : cloud) {
    const double t = static_cast<double>(p.t_offset);
    if (t < -kOffsetSlack || t > sweep_duration + kOffsetSlack) {
      throw std::invalid_argument(
          "compensate_ego_motion: point t_offset outside [0, sweep_duration]");
    }
    auto it = ref_from_sweep.find(p.t_offset);
    if (it == ref_from_sweep.end()) {
      const double s = std::clamp(t / sweep_duration, 0.0, 1.0);
      const Pose world_from_point =
          interpolate_pose(pose_start, pose_end, s);
      it = ref_from_sweep
               .emplace(p.t_offset, ref_from_world * world_from_point)
               .first;
    }
    const Eigen::Vector3d moved = it->second.apply(p.position());
    LidarPoint q = p;
    q.x = static_cast<float>(moved.x());
    q.y = static_cast<float>(moved.y());
    q.z = static_cast<float>(moved.z());
    q.t_offset = static_cast<float>(reference_time);
    out.push_back(q);
  }
  return out;
}

RadarCloud retime_radar_cloud(const RadarCloud& cloud,
                              const Pose& pose_at_capture,
                              const Pose& pose_at_reference) {
  const Pose ref_from_capture = pose_at_reference.inverse() * pose_at_capture;
  RadarCloud out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) {
    const Eigen::Vector3d moved = ref_from_capture.apply(p.position());
    RadarPoint q = p;
    q.x = static_cast<float>(moved.x());
    q.y = static_cast<float>(moved.y());
    q.z = static_cast<float>(moved.z());
    out.push_back(q);
  }
  return out;
}

}  // namespace occ
