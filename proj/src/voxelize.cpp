// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/voxelize.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <sstream>

#include "occ/binio.hpp"
#include "occ/errors.hpp"

namespace occ {

VoxelHistogramGrid::VoxelHistogramGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  hits_.assign(spec_.voxel_count() * kNumSemanticClasses, 0);
  free_.assign(spec_.voxel_count(), 0);
}

std::uint64_t VoxelHistogramGrid::total_hits(std::size_t voxel) const {
  std::uint64_t total = 0;
  for (int c = 0; c < kNumSemanticClasses; ++c) {
    total += hits_[voxel * kNumSemanticClasses + static_cast<std::size_t>(c)];
  }
  return total;
}

void VoxelHistogramGrid::merge(const VoxelHistogramGrid& other) {
  if (!spec_.same_layout(other.spec_)) {
    throw EvalError("VoxelHistogramGrid::merge: grid layouts differ");
  }
  for (std::size_t i = 0; i < hits_.size(); ++i) {
    hits_[i] += other.hits_[i];
  }
  for (std::size_t i = 0; i < free_.size(); ++i) {
    free_[i] += other.free_[i];
  }
}

std::size_t VoxelMask::count_set() const {
  std::size_t n = 0;
  for (const auto f : flags) {
    n += f != 0;
  }
  return n;
}

BinStats bin_points(VoxelHistogramGrid& grid,
                    std::span<const AssembledPoint> points) {
  BinStats stats;
  const GridSpec& spec = grid.spec();
  for (const auto& p : points) {
    const Eigen::Vector3i cell = spec.cell_of(p.position);
    if (!spec.in_bounds(cell)) {
      ++stats.dropped;
      continue;
    }
    grid.add_hit(spec.flat_index(cell), p.label);
    ++stats.binned;
  }
  return stats;
}

void carve_free(VoxelHistogramGrid& grid,
                std::span<const AssembledPoint> points,
                const Eigen::Vector3d& sensor_origin) {
  const GridSpec& spec = grid.spec();
  for (const auto& p : points) {
    const RayTraversal t = traverse_ray(spec, Ray{sensor_origin, p.position});
    for (const auto& cell : t.traversed) {
      grid.add_free(spec.flat_index(cell));
    }
  }
}

void carve_free(VoxelHistogramGrid& grid, const AssembledScene& scene) {
  for (const auto& frame : scene.frames) {
    carve_free(grid,
               std::span<const AssembledPoint>(scene.points)
                   .subspan(frame.begin, frame.end - frame.begin),
               frame.sensor_origin);
  }
}

ResolveResult resolve_labels(const VoxelHistogramGrid& grid) {
  ResolveResult result;
  result.occupancy = OccupancyGrid::empty(grid.spec());
  const std::size_t n = grid.spec().voxel_count();
  for (std::size_t v = 0; v < n; ++v) {
    std::uint32_t best_count = 0;
    ClassId best_class = kFreeClass;
    for (int c = 0; c < kNumSemanticClasses; ++c) {
      const std::uint32_t count =
          grid.hit_count(v, static_cast<ClassId>(c));
      if (count > best_count) {
        best_count = count;
        best_class = static_cast<ClassId>(c);
      }
    }
    if (best_count > 0) {
      result.occupancy.labels[v] = best_class;
    } else if (grid.free_count(v) == 0) {
      ++result.unobserved;
    }
  }
  return result;
}

VoxelMask observed_mask(const VoxelHistogramGrid& grid) {
  VoxelMask mask = VoxelMask::empty(grid.spec());
  const std::size_t n = grid.spec().voxel_count();
  for (std::size_t v = 0; v < n; ++v) {
    if (grid.free_count(v) > 0 || grid.total_hits(v) > 0) {
      mask.flags[v] = 1;
    }
  }
  return mask;
}

OccupancyGrid refine_lonely(const OccupancyGrid& grid) {
  OccupancyGrid out = grid;
  const GridSpec& spec = grid.spec;
  for (int x = 0; x < spec.dims[0]; ++x) {
    for (int y = 0; y < spec.dims[1]; ++y) {
      for (int z = 0; z < spec.dims[2]; ++z) {
        const Eigen::Vector3i cell(x, y, z);
        const std::size_t index = spec.flat_index(cell);
        const ClassId label = grid.labels[index];
        if (label == kFreeClass) {
          continue;
        }
        std::array<std::uint32_t, kNumSemanticClasses> votes{};
        std::uint32_t occupied_neighbors = 0;
        bool same_class_neighbor = false;
        for (int dx = -1; dx <= 1; ++dx) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dz = -1; dz <= 1; ++dz) {
              if (dx == 0 && dy == 0 && dz == 0) {
                continue;
              }
              const Eigen::Vector3i nb(x + dx, y + dy, z + dz);
              if (!spec.in_bounds(nb)) {
                continue;
              }
              const ClassId nb_label = grid.labels[spec.flat_index(nb)];
              if (nb_label == kFreeClass) {
                continue;
              }
              ++votes[nb_label];
              ++occupied_neighbors;
              same_class_neighbor |= nb_label == label;
            }
          }
        }
        if (occupied_neighbors == 0) {
          out.labels[index] = kFreeClass;
        } else if (!same_class_neighbor) {
          ClassId majority = 0;
          std::uint32_t best = 0;
          for (int c = 0; c < kNumSemanticClasses; ++c) {
            if (votes[static_cast<std::size_t>(c)] > best) {
              best = votes[static_cast<std::size_t>(c)];
              majority = static_cast<ClassId>(c);
            }
          }
          out.labels[index] = majority;
        }
      }
    }
  }
  return out;
}

VoxelMask fov_mask(const GridSpec& spec, const CameraIntrinsics& camera,
                   const Pose& camera_to_grid) {
  VoxelMask mask = VoxelMask::empty(spec);
  const Pose grid_to_camera = camera_to_grid.inverse();
  const std::size_t n = spec.voxel_count();
  for (std::size_t v = 0; v < n; ++v) {
    const Eigen::Vector3d center = spec.center_of(spec.cell_from_flat(v));
    const auto px = project_point(camera, grid_to_camera.apply(center));
    if (px && camera.in_image(px->u, px->v)) {
      mask.flags[v] = 1;
    }
  }
  return mask;
}

namespace {

constexpr char kGridMagic[5] = "OCCG";
constexpr char kMaskMagic[5] = "OCCM";
constexpr std::uint32_t kGridVersion = 1;

void encode_grid_header(ByteWriter& w, const char magic[5],
                        const GridSpec& spec) {
  w.magic(magic);
  w.u32(kGridVersion);
  for (int a = 0; a < 3; ++a) {
    w.u32(static_cast<std::uint32_t>(spec.dims[static_cast<std::size_t>(a)]));
  }
  for (int a = 0; a < 3; ++a) {
    w.f32(static_cast<float>(spec.origin[a]));
  }
  w.f32(static_cast<float>(spec.voxel_size));
}

GridSpec decode_grid_header(ByteReader& r, const char magic[5],
                            const std::string& context) {
  r.expect_magic(magic);
  const std::uint32_t version = r.u32();
  if (version != kGridVersion) {
    throw FormatError(context + ": unsupported version " +
                      std::to_string(version) + " at byte 4");
  }
  GridSpec spec;
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t d = r.u32();
    if (d == 0 || d > (1u << 16)) {
      throw FormatError(context + ": unreasonable grid dimension " +
                        std::to_string(d));
    }
    spec.dims[static_cast<std::size_t>(a)] = static_cast<int>(d);
  }
  for (int a = 0; a < 3; ++a) {
    spec.origin[a] = static_cast<double>(r.f32());
  }
  spec.voxel_size = static_cast<double>(r.f32());
  if (!(spec.voxel_size > 0.0f)) {
    throw FormatError(context + ": non-positive voxel size");
  }
  return spec;
}

void check_payload(ByteReader& r, std::size_t total, std::size_t expected,
                   const std::string& context) {
  const std::size_t payload = total - r.offset();
  if (payload != expected) {
    throw FormatError(context + ": payload holds " + std::to_string(payload) +
                      " byte(s) but the header requires " +
                      std::to_string(expected));
  }
}

}  // namespace

std::vector<std::uint8_t> encode_occupancy_grid(const OccupancyGrid& grid) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(36 + grid.labels.size());
  ByteWriter w(bytes);
  encode_grid_header(w, kGridMagic, grid.spec);
  w.bytes(grid.labels.data(), grid.labels.size());
  return bytes;
}

OccupancyGrid decode_occupancy_grid(const std::vector<std::uint8_t>& bytes,
                                    const std::string& context) {
  ByteReader r(bytes, context);
  OccupancyGrid grid;
  grid.spec = decode_grid_header(r, kGridMagic, context);
  check_payload(r, bytes.size(), grid.spec.voxel_count(), context);
  grid.labels.reserve(grid.spec.voxel_count());
  for (std::size_t v = 0; v < grid.spec.voxel_count(); ++v) {
    const std::uint8_t label = bytes[r.offset() + v];
    if (label >= kNumClasses) {
      throw FormatError(context + ": label " + std::to_string(label) +
                        " outside [0, 17] at byte " +
                        std::to_string(r.offset() + v));
    }
    grid.labels.push_back(label);
  }
  return grid;
}

OccupancyGrid read_occupancy_grid(const std::filesystem::path& path) {
  return decode_occupancy_grid(read_file_bytes(path), path.string());
}

void write_occupancy_grid(const std::filesystem::path& path,
                          const OccupancyGrid& grid) {
  write_file_bytes(path, encode_occupancy_grid(grid));
}

std::vector<std::uint8_t> encode_voxel_mask(const VoxelMask& mask) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(36 + mask.flags.size());
  ByteWriter w(bytes);
  encode_grid_header(w, kMaskMagic, mask.spec);
  w.bytes(mask.flags.data(), mask.flags.size());
  return bytes;
}

VoxelMask decode_voxel_mask(const std::vector<std::uint8_t>& bytes,
                            const std::string& context) {
  ByteReader r(bytes, context);
  VoxelMask mask;
  mask.spec = decode_grid_header(r, kMaskMagic, context);
  check_payload(r, bytes.size(), mask.spec.voxel_count(), context);
  mask.flags.reserve(mask.spec.voxel_count());
  for (std::size_t v = 0; v < mask.spec.voxel_count(); ++v) {
    const std::uint8_t flag = bytes[r.offset() + v];
    if (flag > 1) {
      throw FormatError(context + ": mask byte " + std::to_string(flag) +
                        " outside {0, 1} at byte " +
                        std::to_string(r.offset() + v));
    }
    mask.flags.push_back(flag);
  }
  return mask;
}

VoxelMask read_voxel_mask(const std::filesystem::path& path) {
  return decode_voxel_mask(read_file_bytes(path), path.string());
}

void write_voxel_mask(const std::filesystem::path& path,
                      const VoxelMask& mask) {
  write_file_bytes(path, encode_voxel_mask(mask));
}

namespace {

// Display colors per class id, loosely matching common driving palettes.
constexpr std::array<std::array<std::uint8_t, 3>, kNumSemanticClasses>
    kClassColors = {{
        {0, 0, 0},        // others
        {112, 128, 144},  // barrier
        {220, 20, 60},    // bicycle
        {255, 127, 80},   // bus
        {255, 158, 0},    // car
        {233, 150, 70},   // construction_vehicle
        {255, 61, 99},    // motorcycle
        {0, 0, 230},      // pedestrian
        {47, 79, 79},     // traffic_cone
        {255, 140, 0},    // trailer
        {255, 99, 71},    // truck
        {0, 207, 191},    // driveable_surface
        {175, 0, 75},     // other_flat
        {75, 0, 75},      // sidewalk
        {112, 180, 60},   // terrain
        {222, 184, 135},  // manmade
        {0, 175, 0},      // vegetation
    }};

}  // namespace

void write_occupancy_ply(const std::filesystem::path& path,
                         const OccupancyGrid& grid) {
  std::size_t occupied = 0;
  for (const auto label : grid.labels) {
    occupied += label != kFreeClass;
  }

  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\n"
         << "element vertex " << occupied << "\n"
         << "property float x\nproperty float y\nproperty float z\n"
         << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
         << "end_header\n";

  std::vector<std::uint8_t> bytes;
  const std::string head = header.str();
  bytes.insert(bytes.end(), head.begin(), head.end());
  ByteWriter w(bytes);
  for (std::size_t v = 0; v < grid.labels.size(); ++v) {
    const ClassId label = grid.labels[v];
    if (label == kFreeClass) {
      continue;
    }
    const Eigen::Vector3d c = grid.spec.center_of(grid.spec.cell_from_flat(v));
    w.f32(static_cast<float>(c.x()));
    w.f32(static_cast<float>(c.y()));
    w.f32(static_cast<float>(c.z()));
    const auto& color = kClassColors[label];
    w.u8(color[0]);
    w.u8(color[1]);
    w.u8(color[2]);
  }
  write_file_bytes(path, bytes);
}

}  // namespace occ
