// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occ/cloud.hpp"
#include "occ/geometry.hpp"
#include "occ/image.hpp"
#include "occ/manifest.hpp"
#include "occ/voxelize.hpp"

namespace occ {

/// Analytic scene element: an infinite horizontal ground plane (solid
/// strictly below `plane_z`) or an axis-aligned box. Boxes translate at
/// constant world velocity; the pose at time t shifts the center by
/// velocity * t. Containment is half-open like grid cells: a point on a low
/// face is inside, a point on a high face is not.
struct ScenePrimitive {
  enum class Kind { kGroundPlane, kBox };

  Kind kind = Kind::kBox;
  ClassId class_id = 0;
  double plane_z = 0.0;
  Eigen::Vector3d box_center = Eigen::Vector3d::Zero();  // at time 0
  Eigen::Vector3d box_size = Eigen::Vector3d::Ones();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();

  static ScenePrimitive ground(double z, ClassId class_id);
  static ScenePrimitive box(const Eigen::Vector3d& center,
                            const Eigen::Vector3d& size, ClassId class_id,
                            const Eigen::Vector3d& velocity =
                                Eigen::Vector3d::Zero());

  Eigen::Vector3d center_at(double time) const {
    return box_center + velocity * time;
  }
  bool is_dynamic() const { return velocity.squaredNorm() > 0.0; }
  bool contains(const Eigen::Vector3d& p, double time) const;
};

struct SceneHit {
  double t = 0.0;  // ray parameter, point = origin + t * direction
  int primitive = -1;
};

/// Nearest intersection of a world-space ray with the scene at one instant,
/// restricted to t in (t_min, t_max]. Exact math, no sampling.
std::optional<SceneHit> intersect_scene(
    std::span<const ScenePrimitive> primitives, const Eigen::Vector3d& origin,
    const Eigen::Vector3d& direction, double t_min, double t_max, double time);

/// Spinning-lidar beam layout: `rings` elevation steps spread linearly over
/// [elev_min, elev_max], each swept through `azimuth_steps` equal azimuths.
struct BeamPattern {
  int rings = 32;
  int azimuth_steps = 900;
  double elev_min = -22.0 * std::numbers::pi / 180.0;
  double elev_max = 22.0 * std::numbers::pi / 180.0;
  double max_range = 120.0;
};

/// Casts every beam from the sensor pose (sensor-to-world) and returns the
/// returns in the sensor frame, labeled by the primitive each beam hit.
/// Beams that hit nothing within max_range produce no point.
LabeledCloud simulate_lidar(std::span<const ScenePrimitive> primitives,
                            const Pose& sensor_pose, const BeamPattern& beams,
                            double time);

/// Draws `detections_per_object` surface samples from each primitive visible
/// to the sensor, perturbs positions with isotropic Gaussian noise of the
/// given sigma and fills the radial velocity (positive receding) from the
/// primitive's motion. Deterministic for a fixed seed.
RadarCloud simulate_radar(std::span<const ScenePrimitive> primitives,
                          const Pose& sensor_pose, int detections_per_object,
                          double noise_sigma, std::uint64_t seed, double time);

/// Ground-truth labels by construction: every voxel whose center lies inside
/// a primitive at `time` takes that primitive's class; overlaps resolve to
/// the later primitive in list order. `grid_to_world` anchors the grid.
OccupancyGrid analytic_occupancy(std::span<const ScenePrimitive> primitives,
                                 const GridSpec& grid, double time,
                                 const Pose& grid_to_world);

/// Flat-shaded primary-ray rendering, one ray per pixel through (u, v).
RgbImage render_scene_image(std::span<const ScenePrimitive> primitives,
                            const Pose& camera_pose,
                            const CameraIntrinsics& camera, double time);

/// A complete generated sequence: primitives, ego trajectory, sensors and
/// the frames to mark as key frames.
struct SyntheticScenario {
  std::string name;
  std::vector<ScenePrimitive> primitives;
  BeamPattern beams;
  int frame_count = 7;
  double frame_dt = 0.25;
  Eigen::Vector3d ego_velocity = Eigen::Vector3d::Zero();
  std::vector<int> key_frames;
  int radar_detections_per_object = 30;
  double radar_noise_sigma = 0.0;
};

const std::vector<std::string>& scenario_names();

/// Throws ConfigError for unknown names.
SyntheticScenario make_scenario(const std::string& name);

/// Writes a full scene directory: manifest.json, per-frame lidar/radar
/// clouds and camera images, plus analytic ground-truth grids (gt/) for
/// every key frame. Byte-identical for identical (scenario, seed) inputs.
void generate_scene(const SyntheticScenario& scenario, std::uint64_t seed,
                    const std::filesystem::path& out_dir);

}  // namespace occ
