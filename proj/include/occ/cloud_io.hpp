// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "occ/cloud.hpp"

namespace occ {

/// Point cloud container ("OCPC"). Little-endian layout:
///   bytes 0..3   magic "OCPC"
///   bytes 4..7   u32 version, currently 1
///   byte  8      u8 schema: 1 = labeled lidar, 2 = radar
///   bytes 9..12  u32 point count
///   then `count` packed 24-byte records.
/// Lidar record: f32 x, y, z, intensity; u8 label; u8 pad; u16 t_offset in
/// 0.1 ms steps; 4 pad bytes. Radar record: f32 x, y, z, velocity, rcs,
/// confidence. Pad bytes are written as zero, so encode(decode(f)) == f.
enum class CloudSchema : std::uint8_t { kLidar = 1, kRadar = 2 };

/// Schema byte of an existing cloud file, without decoding the points.
CloudSchema peek_cloud_schema(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_lidar_cloud(const LabeledCloud& cloud);
std::vector<std::uint8_t> encode_radar_cloud(const RadarCloud& cloud);

/// Decoders validate the header, record sizes, labels (<= 16) and radar
/// confidences ([0, 1]); violations raise FormatError naming the byte.
LabeledCloud decode_lidar_cloud(const std::vector<std::uint8_t>& bytes,
                                const std::string& context);
RadarCloud decode_radar_cloud(const std::vector<std::uint8_t>& bytes,
                              const std::string& context);

LabeledCloud read_lidar_cloud(const std::filesystem::path& path);
RadarCloud read_radar_cloud(const std::filesystem::path& path);
void write_lidar_cloud(const std::filesystem::path& path,
                       const LabeledCloud& cloud);
void write_radar_cloud(const std::filesystem::path& path,
                       const RadarCloud& cloud);

}  // namespace occ
