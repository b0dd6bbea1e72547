// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/pillars.hpp"

#include <cmath>

#include "occ/binio.hpp"
#include "occ/errors.hpp"

namespace occ {

PillarGrid pillarize(const RadarCloud& cloud, double pillar_size,
                     const PillarExtent& extent) {
  if (!(pillar_size > 0.0)) {
    throw ConfigError("pillarize: pillar_size must be positive");
  }
  if (!(extent.x_max > extent.x_min) || !(extent.y_max > extent.y_min)) {
    throw ConfigError("pillarize: extent must have positive area");
  }
  PillarGrid grid;
  grid.extent = extent;
  grid.pillar_size = pillar_size;
  grid.nx = static_cast<int>(
      std::ceil((extent.x_max - extent.x_min) / pillar_size - 1e-9));
  grid.ny = static_cast<int>(
      std::ceil((extent.y_max - extent.y_min) / pillar_size - 1e-9));
  grid.members.resize(static_cast<std::size_t>(grid.nx) * grid.ny);

  for (std::uint32_t i = 0; i < cloud.size(); ++i) {
    const RadarPoint& p = cloud[i];
    const int ix = static_cast<int>(
        std::floor((static_cast<double>(p.x) - extent.x_min) / pillar_size));
    const int iy = static_cast<int>(
        std::floor((static_cast<double>(p.y) - extent.y_min) / pillar_size));
    if (ix < 0 || ix >= grid.nx || iy < 0 || iy >= grid.ny) {
      ++grid.dropped;
      continue;
    }
    grid.members[static_cast<std::size_t>(grid.pillar_index(ix, iy))]
        .push_back(i);
  }
  return grid;
}

PillarFeatures featurize(const PillarGrid& grid, const RadarCloud& cloud) {
  // Pillar means in double to keep the zero-mean offset property tight.
  struct Mean {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    std::size_t count = 0;
  };
  std::vector<Mean> means(grid.members.size());
  std::vector<std::uint32_t> pillar_of(cloud.size(), 0);
  std::vector<std::uint8_t> in_bounds(cloud.size(), 0);
  for (std::size_t pillar = 0; pillar < grid.members.size(); ++pillar) {
    for (const std::uint32_t i : grid.members[pillar]) {
      means[pillar].sum += cloud[i].position();
      ++means[pillar].count;
      pillar_of[i] = static_cast<std::uint32_t>(pillar);
      in_bounds[i] = 1;
    }
  }

  PillarFeatures out;
  for (std::uint32_t i = 0; i < cloud.size(); ++i) {
    if (!in_bounds[i]) {
      continue;
    }
    const RadarPoint& p = cloud[i];
    const Mean& m = means[pillar_of[i]];
    const Eigen::Vector3d mean = m.sum / static_cast<double>(m.count);
    std::array<float, 9> row;
    row[0] = p.x;
    row[1] = p.y;
    row[2] = p.z;
    row[3] = p.velocity;
    row[4] = p.rcs;
    row[5] = p.confidence;
    row[6] = static_cast<float>(static_cast<double>(p.x) - mean.x());
    row[7] = static_cast<float>(static_cast<double>(p.y) - mean.y());
    row[8] = static_cast<float>(static_cast<double>(p.z) - mean.z());
    out.rows.push_back(row);
    out.pillar_ids.push_back(pillar_of[i]);
  }
  return out;
}

void write_pillar_features(const std::filesystem::path& path,
                           const PillarFeatures& features) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(features.rows.size() * 40);
  ByteWriter w(bytes);
  for (std::size_t i = 0; i < features.rows.size(); ++i) {
    w.u32(features.pillar_ids[i]);
    for (const float v : features.rows[i]) {
      w.f32(v);
    }
  }
  write_file_bytes(path, bytes);
}

}  // namespace occ
