// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <utility>
#include <vector>

#include "occ/cloud.hpp"
#include "occ/manifest.hpp"

namespace occ {

/// Multi-frame accumulation settings. `window` counts neighbor frames on
/// each side of the key frame; `dynamic_classes` are kept only from the key
/// frame itself since movers smear when stacked across time.
struct AccumulationConfig {
  int window = 10;
  std::set<ClassId> dynamic_classes = default_dynamic_classes();
};

/// Splits a cloud into (dynamic, static) halves by label. Point order within
/// each half follows the input.
std::pair<LabeledCloud, LabeledCloud> split_dynamic(
    const LabeledCloud& cloud, const AccumulationConfig& config);

/// A point lifted into the assembly frame. Positions are doubles: the float
/// sensor coordinates are exact enough, but stacking world transforms needs
/// the headroom.
struct AssembledPoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  ClassId label = 0;
};

/// Contiguous slice of the assembled cloud contributed by one frame,
/// together with the lidar origin that emitted those beams.
struct FrameContribution {
  int frame_id = 0;
  Eigen::Vector3d sensor_origin = Eigen::Vector3d::Zero();
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct AssembledScene {
  std::vector<AssembledPoint> points;
  std::vector<FrameContribution> frames;
};

/// Loads every frame within the window around `key_frame_id`, compensates
/// sweeps when points carry time offsets, drops dynamic points from non-key
/// frames and stacks everything in the key frame's ego frame. Frames
/// contribute in ascending frame order; the key frame keeps its full cloud
/// in file order, neighbors keep their static points in file order.
/// Unknown key ids and unreadable clouds raise FormatError naming the frame.
AssembledScene assemble_scene(const SceneManifest& manifest, int key_frame_id,
                              const AccumulationConfig& config);

}  // namespace occ
