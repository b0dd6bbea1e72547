// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/depth.hpp"

#include <algorithm>
#include <cmath>

#include "occ/binio.hpp"
#include "occ/errors.hpp"

namespace occ {

namespace {

void splat_point(DepthImage& map, const CameraIntrinsics& camera,
                 const Eigen::Vector3d& cam_point) {
  const auto px = project_point(camera, cam_point);
  if (!px) {
    return;
  }
  const long col = std::lround(px->u);
  const long row = std::lround(px->v);
  if (col < 0 || col >= map.width || row < 0 || row >= map.height) {
    return;
  }
  float& slot = map.at(static_cast<int>(row), static_cast<int>(col));
  const float depth = static_cast<float>(px->depth);
  if (slot == 0.0f || depth < slot) {
    slot = depth;
  }
}

}  // namespace

DepthImage project_depth_map(std::span<const Eigen::Vector3d> sensor_points,
                             const CameraIntrinsics& camera,
                             const Pose& sensor_to_camera, int width,
                             int height) {
  DepthImage map = DepthImage::empty(width, height);
  for (const auto& p : sensor_points) {
    splat_point(map, camera, sensor_to_camera.apply(p));
  }
  return map;
}

DepthImage make_pseudo_depth(const RadarCloud& radar,
                             const Pose& radar_to_camera,
                             const CameraIntrinsics& camera, int stride) {
  if (stride < 1) {
    throw ConfigError("make_pseudo_depth: stride must be at least 1");
  }
  if (camera.width % stride != 0 || camera.height % stride != 0) {
    throw ConfigError("make_pseudo_depth: stride " + std::to_string(stride) +
                      " does not divide the working resolution " +
                      std::to_string(camera.width) + "x" +
                      std::to_string(camera.height));
  }
  const double inv = 1.0 / static_cast<double>(stride);
  const CameraIntrinsics coarse = camera.scaled(inv, inv);
  DepthImage map = DepthImage::empty(camera.width / stride,
                                     camera.height / stride);
  for (const auto& p : radar) {
    splat_point(map, coarse, radar_to_camera.apply(p.position()));
  }
  return map;
}

RgbdImage make_rgbd(const RgbImage& image, const RadarCloud& radar,
                    const Pose& radar_to_camera,
                    const CameraIntrinsics& camera) {
  if (image.width != camera.width || image.height != camera.height) {
    throw ConfigError("make_rgbd: image is " + std::to_string(image.width) +
                      "x" + std::to_string(image.height) +
                      " but the intrinsics describe " +
                      std::to_string(camera.width) + "x" +
                      std::to_string(camera.height));
  }
  RgbdImage out;
  out.width = image.width;
  out.height = image.height;
  const std::size_t n =
      static_cast<std::size_t>(image.width) * image.height;
  out.r.resize(n);
  out.g.resize(n);
  out.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.r[i] = image.pixels[i * 3] / 255.0f;
    out.g[i] = image.pixels[i * 3 + 1] / 255.0f;
    out.b[i] = image.pixels[i * 3 + 2] / 255.0f;
  }
  out.depth = make_pseudo_depth(radar, radar_to_camera, camera, 1);
  return out;
}

DepthBinMap bin_depth(const DepthImage& depth, const DepthBinning& binning) {
  if (binning.bins < 1 || !(binning.d_max > binning.d_min)) {
    throw ConfigError("bin_depth: need bins >= 1 and d_max > d_min");
  }
  DepthBinMap map;
  map.width = depth.width;
  map.height = depth.height;
  map.bins.assign(depth.depth.size(), kDepthBinEmpty);
  const double span = binning.d_max - binning.d_min;
  for (std::size_t i = 0; i < depth.depth.size(); ++i) {
    const float d = depth.depth[i];
    if (d == 0.0f) {
      continue;
    }
    const double raw = std::floor(binning.bins *
                                  (static_cast<double>(d) - binning.d_min) /
                                  span);
    const double clamped =
        std::clamp(raw, 0.0, static_cast<double>(binning.bins - 1));
    map.bins[i] = static_cast<std::uint8_t>(clamped);
  }
  return map;
}

namespace {

constexpr char kDepthMagic[5] = "DPTH";
constexpr char kBinMagic[5] = "DBIN";
constexpr std::uint32_t kDepthVersion = 1;

std::pair<int, int> decode_depth_header(ByteReader& r, const char magic[5],
                                        const std::string& context) {
  r.expect_magic(magic);
  const std::uint32_t version = r.u32();
  if (version != kDepthVersion) {
    throw FormatError(context + ": unsupported version " +
                      std::to_string(version) + " at byte 4");
  }
  const std::uint32_t w = r.u32();
  const std::uint32_t h = r.u32();
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) {
    throw FormatError(context + ": unreasonable dimensions " +
                      std::to_string(w) + "x" + std::to_string(h));
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

}  // namespace

std::vector<std::uint8_t> encode_depth_image(const DepthImage& depth) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(16 + depth.depth.size() * 4);
  ByteWriter w(bytes);
  w.magic(kDepthMagic);
  w.u32(kDepthVersion);
  w.u32(static_cast<std::uint32_t>(depth.width));
  w.u32(static_cast<std::uint32_t>(depth.height));
  for (const float d : depth.depth) {
    w.f32(d);
  }
  return bytes;
}

DepthImage decode_depth_image(const std::vector<std::uint8_t>& bytes,
                              const std::string& context) {
  ByteReader r(bytes, context);
  const auto [width, height] = decode_depth_header(r, kDepthMagic, context);
  DepthImage map = DepthImage::empty(width, height);
  const std::size_t n = map.depth.size();
  if (r.remaining() != n * 4) {
    throw FormatError(context + ": payload holds " +
                      std::to_string(r.remaining()) +
                      " byte(s) but the header requires " +
                      std::to_string(n * 4));
  }
  for (std::size_t i = 0; i < n; ++i) {
    map.depth[i] = r.f32();
  }
  return map;
}

DepthImage read_depth_image(const std::filesystem::path& path) {
  return decode_depth_image(read_file_bytes(path), path.string());
}

void write_depth_image(const std::filesystem::path& path,
                       const DepthImage& depth) {
  write_file_bytes(path, encode_depth_image(depth));
}

std::vector<std::uint8_t> encode_depth_bin_map(const DepthBinMap& map) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(16 + map.bins.size());
  ByteWriter w(bytes);
  w.magic(kBinMagic);
  w.u32(kDepthVersion);
  w.u32(static_cast<std::uint32_t>(map.width));
  w.u32(static_cast<std::uint32_t>(map.height));
  w.bytes(map.bins.data(), map.bins.size());
  return bytes;
}

DepthBinMap decode_depth_bin_map(const std::vector<std::uint8_t>& bytes,
                                 const std::string& context) {
  ByteReader r(bytes, context);
  DepthBinMap map;
  const auto [width, height] = decode_depth_header(r, kBinMagic, context);
  map.width = width;
  map.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (r.remaining() != n) {
    throw FormatError(context + ": payload holds " +
                      std::to_string(r.remaining()) +
                      " byte(s) but the header requires " + std::to_string(n));
  }
  map.bins.assign(bytes.end() - static_cast<std::ptrdiff_t>(n), bytes.end());
  return map;
}

DepthBinMap read_depth_bin_map(const std::filesystem::path& path) {
  return decode_depth_bin_map(read_file_bytes(path), path.string());
}

void write_depth_bin_map(const std::filesystem::path& path,
                         const DepthBinMap& map) {
  write_file_bytes(path, encode_depth_bin_map(map));
}

}  // namespace occ
