// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "occ/accumulate.hpp"
#include "occ/classes.hpp"
#include "occ/geometry.hpp"

namespace occ {

/// Per-voxel evidence counters: one hit counter per semantic class plus a
/// free counter. Counters only grow, and merging two grids adds them
/// entry-wise, so evidence built from disjoint frame subsets can be combined
/// in any order without changing the resolved result.
class VoxelHistogramGrid {
 public:
  explicit VoxelHistogramGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }

  std::uint32_t hit_count(std::size_t voxel, ClassId label) const {
    return hits_[voxel * kNumSemanticClasses + label];
  }
  void add_hit(std::size_t voxel, ClassId label) {
    ++hits_[voxel * kNumSemanticClasses + label];
  }
  std::uint32_t free_count(std::size_t voxel) const { return free_[voxel]; }
  void add_free(std::size_t voxel) { ++free_[voxel]; }

  /// Total hits across all classes for one voxel.
  std::uint64_t total_hits(std::size_t voxel) const;

  /// Entry-wise counter addition. Throws EvalError on grid layout mismatch.
  void merge(const VoxelHistogramGrid& other);

 private:
  GridSpec spec_;
  std::vector<std::uint32_t> hits_;
  std::vector<std::uint32_t> free_;
};

/// Resolved labels, one per voxel, id 17 meaning free space.
struct OccupancyGrid {
  GridSpec spec;
  std::vector<ClassId> labels;

  static OccupancyGrid empty(const GridSpec& spec) {
    OccupancyGrid g;
    g.spec = spec;
    g.labels.assign(spec.voxel_count(), kFreeClass);
    return g;
  }
};

/// Per-voxel boolean flags, used for both camera frustum masks and
/// observed-voxel masks.
struct VoxelMask {
  GridSpec spec;
  std::vector<std::uint8_t> flags;

  static VoxelMask empty(const GridSpec& spec) {
    VoxelMask m;
    m.spec = spec;
    m.flags.assign(spec.voxel_count(), 0);
    return m;
  }

  std::size_t count_set() const;
};

struct BinStats {
  std::uint64_t binned = 0;
  std::uint64_t dropped = 0;  // points outside the grid
};

/// Bins labeled points into hit counters with the half-open floor
/// convention; out-of-grid points are counted as dropped and skipped.
BinStats bin_points(VoxelHistogramGrid& grid,
                    std::span<const AssembledPoint> points);

/// Marks free space: for every beam, increments the free counter of every
/// voxel crossed strictly before the return. Beams whose return lies outside
/// the grid still carve the portion that crosses it.
void carve_free(VoxelHistogramGrid& grid,
                std::span<const AssembledPoint> points,
                const Eigen::Vector3d& sensor_origin);
void carve_free(VoxelHistogramGrid& grid, const AssembledScene& scene);

struct ResolveResult {
  OccupancyGrid occupancy;
  std::uint64_t unobserved = 0;  // voxels with neither hits nor free evidence
};

/// Collapses evidence to labels: any class hit outranks free evidence, the
/// winning class is the hit-count argmax with ties to the lowest id, and
/// voxels without any evidence fall back to free while being tallied
/// separately.
ResolveResult resolve_labels(const VoxelHistogramGrid& grid);

/// Voxels that carry any evidence at all (hits or free observations).
VoxelMask observed_mask(const VoxelHistogramGrid& grid);

/// One denoising pass over a resolved grid: an occupied voxel whose
/// 26-neighborhood contains other occupied voxels is relabeled to their
/// majority class (ties to the lowest id) when its own class never appears
/// among them; an occupied voxel with no occupied neighbor becomes free.
/// All reads come from the input grid, so the pass order cannot matter.
OccupancyGrid refine_lonely(const OccupancyGrid& grid);

/// Flags voxels whose center projects into the camera image with positive
/// depth. `camera_to_grid` maps the camera frame into the grid frame.
VoxelMask fov_mask(const GridSpec& spec, const CameraIntrinsics& camera,
                   const Pose& camera_to_grid);

/// Occupancy grid container ("OCCG"). Little-endian layout: magic, u32
/// version = 1, u32 dims[3], f32 origin[3], f32 voxel_size, then one label
/// byte per voxel with z fastest: index (x * Ny + y) * Nz + z.
std::vector<std::uint8_t> encode_occupancy_grid(const OccupancyGrid& grid);
OccupancyGrid decode_occupancy_grid(const std::vector<std::uint8_t>& bytes,
                                    const std::string& context);
OccupancyGrid read_occupancy_grid(const std::filesystem::path& path);
void write_occupancy_grid(const std::filesystem::path& path,
                          const OccupancyGrid& grid);

/// Voxel mask container ("OCCM"): the OCCG layout with one 0/1 byte per
/// voxel instead of a label.
std::vector<std::uint8_t> encode_voxel_mask(const VoxelMask& mask);
VoxelMask decode_voxel_mask(const std::vector<std::uint8_t>& bytes,
                            const std::string& context);
VoxelMask read_voxel_mask(const std::filesystem::path& path);
void write_voxel_mask(const std::filesystem::path& path,
                      const VoxelMask& mask);

/// Writes occupied voxel centers as a colored binary PLY for quick visual
/// inspection.
void write_occupancy_ply(const std::filesystem::path& path,
                         const OccupancyGrid& grid);

}  // namespace occ
