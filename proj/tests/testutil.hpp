// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "occ/classes.hpp"
#include "occ/geometry.hpp"
#include "occ/manifest.hpp"

namespace occtest {

/// Self-deleting scratch directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    const unsigned n = counter.fetch_add(1);
    path_ = std::filesystem::temp_directory_path() /
            ("occkit_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(n));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline occ::Pose rotation_z(double angle) {
  occ::Pose p;
  p.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ())
                   .toRotationMatrix();
  return p;
}

inline occ::Pose translation(double x, double y, double z) {
  occ::Pose p;
  p.translation = Eigen::Vector3d(x, y, z);
  return p;
}

/// Minimal valid manifest rooted at `dir`, with the production camera and
/// grid, identity extrinsics and no frames; tests append what they need.
inline occ::SceneManifest base_manifest(const std::filesystem::path& dir) {
  occ::SceneManifest m;
  const auto& names = occ::class_names();
  m.class_names.assign(names.begin(), names.end());
  m.camera = occ::CameraIntrinsics::from_fov(
      1936, 1216, 64.0 * std::numbers::pi / 180.0,
      44.0 * std::numbers::pi / 180.0);
  m.grid = occ::GridSpec::defaults();
  m.base_dir = dir;
  return m;
}

inline occ::FrameRecord make_frame(int id, double timestamp,
                                   const occ::Pose& ego, bool is_key) {
  occ::FrameRecord f;
  f.frame_id = id;
  f.timestamp = timestamp;
  f.ego_pose = ego;
  f.lidar_path = "lidar_" + std::to_string(id) + ".ocpc";
  f.radar_path = "radar_" + std::to_string(id) + ".ocpc";
  f.image_path = "image_" + std::to_string(id) + ".ppm";
  f.is_key = is_key;
  return f;
}

inline occ::Pose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Vector3d axis(u(rng), u(rng), u(rng));
  while (axis.norm() < 1e-3) {
    axis = Eigen::Vector3d(u(rng), u(rng), u(rng));
  }
  occ::Pose p;
  p.rotation = Eigen::AngleAxisd(u(rng) * 3.0, axis.normalized())
                   .toRotationMatrix();
  p.translation = Eigen::Vector3d(u(rng), u(rng), u(rng)) * 10.0;
  return p;
}

}  // namespace occtest
