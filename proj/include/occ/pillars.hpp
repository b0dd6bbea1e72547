// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "occ/cloud.hpp"
#include "occ/geometry.hpp"

namespace occ {

/// Horizontal footprint covered by the pillar grid.
struct PillarExtent {
  double x_min = -40.0;
  double x_max = 40.0;
  double y_min = -40.0;
  double y_max = 40.0;

  static PillarExtent from_grid(const GridSpec& grid) {
    PillarExtent e;
    e.x_min = grid.origin.x();
    e.x_max = grid.origin.x() + grid.voxel_size * grid.dims[0];
    e.y_min = grid.origin.y();
    e.y_max = grid.origin.y() + grid.voxel_size * grid.dims[1];
    return e;
  }
};

/// Vertical columns over a 2D x-y lattice, each listing the indices of the
/// radar points that fall inside it. Binning follows the voxel convention:
/// half-open cells, points on a shared edge belong to the higher index.
struct PillarGrid {
  PillarExtent extent;
  double pillar_size = 0.4;
  int nx = 0;
  int ny = 0;
  std::vector<std::vector<std::uint32_t>> members;  // nx * ny columns
  std::uint64_t dropped = 0;  // points outside the extent

  int pillar_index(int ix, int iy) const { return ix * ny + iy; }
};

PillarGrid pillarize(const RadarCloud& cloud, double pillar_size,
                     const PillarExtent& extent);

/// Nine-channel point features: the six raw radar channels (x, y, z,
/// velocity, rcs, confidence) followed by the offsets of x, y, z from the
/// arithmetic mean of the point's pillar. One row per in-bounds point, in
/// input order, so permuting the cloud permutes the rows the same way.
struct PillarFeatures {
  std::vector<std::array<float, 9>> rows;
  std::vector<std::uint32_t> pillar_ids;  // parallel to rows
};

PillarFeatures featurize(const PillarGrid& grid, const RadarCloud& cloud);

/// Flat binary export: u32 pillar id followed by nine f32 channels per row,
/// little-endian, rows in order.
void write_pillar_features(const std::filesystem::path& path,
                           const PillarFeatures& features);

}  // namespace occ
