// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "occ/classes.hpp"

namespace occ {

/// One labeled lidar return in the sensor frame. `t_offset` is the capture
/// time in seconds relative to the sweep start; the container format stores
/// it in 0.1 ms steps, so values survive a write/read round trip exactly.
struct LidarPoint {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;
  ClassId label = 0;
  float t_offset = 0.0f;

  Eigen::Vector3d position() const { return {x, y, z}; }
};

/// One radar detection in the sensor frame. `velocity` is the radial
/// velocity in m/s, positive when receding.
struct RadarPoint {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float velocity = 0.0f;
  float rcs = 0.0f;
  float confidence = 0.0f;

  Eigen::Vector3d position() const { return {x, y, z}; }
};

using LabeledCloud = std::vector<LidarPoint>;
using RadarCloud = std::vector<RadarPoint>;

}  // namespace occ
