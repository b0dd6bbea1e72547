// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/cloud_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "occ/binio.hpp"

namespace occ {

namespace {

constexpr char kMagic[5] = "OCPC";
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kRecordSize = 24;

// t_offset is carried in 0.1 ms steps; u16 covers sweeps up to 6.5535 s.
std::uint16_t encode_t_offset(float seconds) {
  const long long steps = std::llround(static_cast<double>(seconds) / 1e-4);
  return static_cast<std::uint16_t>(std::clamp<long long>(steps, 0, 0xffff));
}

float decode_t_offset(std::uint16_t steps) {
  return static_cast<float>(static_cast<double>(steps) * 1e-4);
}

std::uint32_t checked_count(const ByteReader& r, std::size_t payload,
                            std::uint32_t count, const std::string& context) {
  const std::size_t expected = static_cast<std::size_t>(count) * kRecordSize;
  if (payload != expected) {
    throw FormatError(context + ": payload holds " + std::to_string(payload) +
                      " byte(s) from byte " + std::to_string(r.offset()) +
                      " but the header count " + std::to_string(count) +
                      " requires " + std::to_string(expected));
  }
  return count;
}

void read_header(ByteReader& r, CloudSchema expected,
                 const std::string& context) {
  r.expect_magic(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw FormatError(context + ": unsupported version " +
                      std::to_string(version) + " at byte 4");
  }
  const std::uint8_t schema = r.u8();
  if (schema != static_cast<std::uint8_t>(CloudSchema::kLidar) &&
      schema != static_cast<std::uint8_t>(CloudSchema::kRadar)) {
    throw FormatError(context + ": unknown schema " + std::to_string(schema) +
                      " at byte 8");
  }
  if (schema != static_cast<std::uint8_t>(expected)) {
    throw FormatError(context + ": schema " + std::to_string(schema) +
                      " does not match the requested reader");
  }
}

}  // namespace

CloudSchema peek_cloud_schema(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  ByteReader r(bytes, path.string());
  r.expect_magic(kMagic);
  r.u32();
  const std::uint8_t schema = r.u8();
  if (schema != 1 && schema != 2) {
    throw FormatError(path.string() + ": unknown schema " +
                      std::to_string(schema) + " at byte 8");
  }
  return static_cast<CloudSchema>(schema);
}

std::vector<std::uint8_t> encode_lidar_cloud(const LabeledCloud& cloud) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(13 + cloud.size() * kRecordSize);
  ByteWriter w(bytes);
  w.magic(kMagic);
  w.u32(kVersion);
  w.u8(static_cast<std::uint8_t>(CloudSchema::kLidar));
  w.u32(static_cast<std::uint32_t>(cloud.size()));
  for (const auto& p : cloud) {
    w.f32(p.x);
    w.f32(p.y);
    w.f32(p.z);
    w.f32(p.intensity);
    w.u8(p.label);
    w.u8(0);
    w.u16(encode_t_offset(p.t_offset));
    w.u32(0);
  }
  return bytes;
}

std::vector<std::uint8_t> encode_radar_cloud(const RadarCloud& cloud) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(13 + cloud.size() * kRecordSize);
  ByteWriter w(bytes);
  w.magic(kMagic);
  w.u32(kVersion);
  w.u8(static_cast<std::uint8_t>(CloudSchema::kRadar));
  w.u32(static_cast<std::uint32_t>(cloud.size()));
  for (const auto& p : cloud) {
    w.f32(p.x);
    w.f32(p.y);
    w.f32(p.z);
    w.f32(p.velocity);
    w.f32(p.rcs);
    w.f32(p.confidence);
  }
  return bytes;
}

LabeledCloud decode_lidar_cloud(const std::vector<std::uint8_t>& bytes,
                                const std::string& context) {
  ByteReader r(bytes, context);
  read_header(r, CloudSchema::kLidar, context);
  const std::uint32_t count =
      checked_count(r, bytes.size() - 13, r.u32(), context);
  LabeledCloud cloud;
  cloud.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    LidarPoint p;
    p.x = r.f32();
    p.y = r.f32();
    p.z = r.f32();
    p.intensity = r.f32();
    if (!(p.intensity >= 0.0f && p.intensity <= 1.0f)) {
      throw FormatError(context + ": intensity " +
                        std::to_string(p.intensity) + " outside [0, 1] at byte " +
                        std::to_string(r.offset() - 4));
    }
    p.label = r.u8();
    if (p.label >= kNumSemanticClasses) {
      throw FormatError(context + ": label " + std::to_string(p.label) +
                        " outside [0, 16] at byte " +
                        std::to_string(r.offset() - 1));
    }
    r.u8();
    p.t_offset = decode_t_offset(r.u16());
    r.u32();
    cloud.push_back(p);
  }
  return cloud;
}

RadarCloud decode_radar_cloud(const std::vector<std::uint8_t>& bytes,
                              const std::string& context) {
  ByteReader r(bytes, context);
  read_header(r, CloudSchema::kRadar, context);
  const std::uint32_t count =
      checked_count(r, bytes.size() - 13, r.u32(), context);
  RadarCloud cloud;
  cloud.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    RadarPoint p;
    p.x = r.f32();
    p.y = r.f32();
    p.z = r.f32();
    p.velocity = r.f32();
    p.rcs = r.f32();
    p.confidence = r.f32();
    if (!(p.confidence >= 0.0f && p.confidence <= 1.0f)) {
      throw FormatError(context + ": confidence " +
                        std::to_string(p.confidence) +
                        " outside [0, 1] at byte " +
                        std::to_string(r.offset() - 4));
    }
    cloud.push_back(p);
  }
  return cloud;
}

LabeledCloud read_lidar_cloud(const std::filesystem::path& path) {
  return decode_lidar_cloud(read_file_bytes(path), path.string());
}

RadarCloud read_radar_cloud(const std::filesystem::path& path) {
  return decode_radar_cloud(read_file_bytes(path), path.string());
}

void write_lidar_cloud(const std::filesystem::path& path,
                       const LabeledCloud& cloud) {
  write_file_bytes(path, encode_lidar_cloud(cloud));
}

void write_radar_cloud(const std::filesystem::path& path,
                       const RadarCloud& cloud) {
  write_file_bytes(path, encode_radar_cloud(cloud));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError(path.string() + ": cannot open for reading");
  }
  std::vector<std::uint8_t> bytes;
  in.seekg(0, std::ios::end);
  bytes.resize(static_cast<std::size_t>(in.tellg()));
  in.seekg(0, std::ios::beg);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!in) {
    throw FormatError(path.string() + ": read failed");
  }
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError(path.string() + ": cannot open for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw FormatError(path.string() + ": write failed");
  }
}

}  // namespace occ
