// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "occ/cloud.hpp"
#include "occ/geometry.hpp"
#include "occ/image.hpp"

namespace occ {

/// Sparse depth map in meters, row-major. 0.0 marks an empty pixel; real
/// depths are always positive since projection rejects z <= 1e-6.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> depth;

  static DepthImage empty(int width, int height) {
    DepthImage d;
    d.width = width;
    d.height = height;
    d.depth.assign(static_cast<std::size_t>(width) * height, 0.0f);
    return d;
  }

  float at(int row, int col) const {
    return depth[static_cast<std::size_t>(row) * width + col];
  }
  float& at(int row, int col) {
    return depth[static_cast<std::size_t>(row) * width + col];
  }
};

/// RGB (floats in [0, 1]) plus a depth plane at the same resolution.
struct RgbdImage {
  int width = 0;
  int height = 0;
  std::vector<float> r;
  std::vector<float> g;
  std::vector<float> b;
  DepthImage depth;
};

struct DepthBinning {
  double d_min = 2.0;
  double d_max = 42.0;
  int bins = 80;
};

inline constexpr std::uint8_t kDepthBinEmpty = 0xff;

/// Depth-bin categories per pixel; kDepthBinEmpty marks empty pixels.
struct DepthBinMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bins;
};

/// Z-buffers sensor-frame points into a depth map: each point is moved to
/// the camera frame, projected, rounded to the nearest pixel and kept when
/// it beats the depth already stored there. Points behind the camera or
/// outside the image are skipped.
DepthImage project_depth_map(std::span<const Eigen::Vector3d> sensor_points,
                             const CameraIntrinsics& camera,
                             const Pose& sensor_to_camera, int width,
                             int height);

/// Radar pseudo-depth at (width / stride) x (height / stride): intrinsics
/// are divided by the stride and the z-buffer projection reruns at the
/// coarse resolution. Throws ConfigError unless the stride divides both
/// working dimensions. `camera` describes the full working resolution.
DepthImage make_pseudo_depth(const RadarCloud& radar,
                             const Pose& radar_to_camera,
                             const CameraIntrinsics& camera, int stride);

/// Fuses a working-resolution image with the stride-1 radar pseudo-depth.
/// Throws ConfigError when the image size differs from the intrinsics.
RgbdImage make_rgbd(const RgbImage& image, const RadarCloud& radar,
                    const Pose& radar_to_camera,
                    const CameraIntrinsics& camera);

/// Quantizes depths to linear categories:
/// floor(bins * (d - d_min) / (d_max - d_min)), clamped to [0, bins - 1];
/// empty pixels map to kDepthBinEmpty.
DepthBinMap bin_depth(const DepthImage& depth, const DepthBinning& binning);

/// Depth map container ("DPTH"). Little-endian: magic, u32 version = 1,
/// u32 width, u32 height, then width * height f32 depths row-major.
std::vector<std::uint8_t> encode_depth_image(const DepthImage& depth);
DepthImage decode_depth_image(const std::vector<std::uint8_t>& bytes,
                              const std::string& context);
DepthImage read_depth_image(const std::filesystem::path& path);
void write_depth_image(const std::filesystem::path& path,
                       const DepthImage& depth);

/// Depth-bin container ("DBIN"): the DPTH header with one category byte per
/// pixel instead of an f32.
std::vector<std::uint8_t> encode_depth_bin_map(const DepthBinMap& map);
DepthBinMap decode_depth_bin_map(const std::vector<std::uint8_t>& bytes,
                                 const std::string& context);
DepthBinMap read_depth_bin_map(const std::filesystem::path& path);
void write_depth_bin_map(const std::filesystem::path& path,
                         const DepthBinMap& map);

}  // namespace occ
