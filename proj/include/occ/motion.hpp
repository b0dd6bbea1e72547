// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "occ/cloud.hpp"
#include "occ/geometry.hpp"

namespace occ {

/// Re-expresses a sweeping lidar cloud as if the whole sweep had been
/// captured at `reference_time` (seconds from sweep start). The sensor pose
/// moves from `pose_start` to `pose_end` (both sensor-to-world) over
/// `sweep_duration` seconds; every point is lifted into the world with the
/// pose interpolated at its own t_offset and brought back with the pose at
/// the reference time, so world-frame positions are preserved.
///
/// Preconditions: both poses rigid, sweep_duration > 0, every t_offset in
/// [0, sweep_duration]. Violations raise std::invalid_argument.
LabeledCloud compensate_ego_motion(const LabeledCloud& cloud,
                                   const Pose& pose_start,
                                   const Pose& pose_end, double sweep_duration,
                                   double reference_time);

/// Moves a snapshot cloud (no per-point timing) from the sensor pose at its
/// capture time to the sensor pose at another time.
RadarCloud retime_radar_cloud(const RadarCloud& cloud,
                              const Pose& pose_at_capture,
                              const Pose& pose_at_reference);

}  // namespace occ
