// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "occ/errors.hpp"
#include "occ/voxelize.hpp"
#include "testutil.hpp"

using namespace occ;

namespace {

GridSpec small_grid(int nx, int ny, int nz, double voxel = 0.4) {
  GridSpec spec;
  spec.origin = Eigen::Vector3d::Zero();
  spec.voxel_size = voxel;
  spec.dims = {nx, ny, nz};
  return spec;
}

AssembledPoint at(double x, double y, double z, ClassId label) {
  return AssembledPoint{Eigen::Vector3d(x, y, z), label};
}

constexpr ClassId kCar = 4;
constexpr ClassId kPedestrian = 7;
constexpr ClassId kTruck = 10;
constexpr ClassId kManmade = 15;

OccupancyGrid random_occupancy(const GridSpec& spec, std::mt19937_64& rng) {
  OccupancyGrid g = OccupancyGrid::empty(spec);
  std::uniform_int_distribution<int> label(0, kNumClasses - 1);
  for (auto& l : g.labels) {
    l = static_cast<ClassId>(label(rng));
  }
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("voxelize");

TEST_CASE("a single point raises exactly one counter") {
  const GridSpec spec = small_grid(4, 4, 4);
  VoxelHistogramGrid grid(spec);
  const auto stats =
      bin_points(grid, std::vector<AssembledPoint>{at(1.0, 1.0, 1.0, kCar)});
  CHECK(stats.binned == 1);
  CHECK(stats.dropped == 0);
  const std::size_t voxel = spec.flat_index({2, 2, 2});
  CHECK(grid.hit_count(voxel, kCar) == 1);
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < spec.voxel_count(); ++v) {
    total += grid.total_hits(v);
  }
  CHECK(total == 1);
}

TEST_CASE("a point on a shared face belongs to the higher cell") {
  const GridSpec spec = small_grid(4, 4, 4);
  VoxelHistogramGrid grid(spec);
  bin_points(grid, std::vector<AssembledPoint>{at(0.4, 0.1, 0.1, kCar)});
  CHECK(grid.hit_count(spec.flat_index({1, 0, 0}), kCar) == 1);
  CHECK(grid.hit_count(spec.flat_index({0, 0, 0}), kCar) == 0);
}

TEST_CASE("histogram counters match a brute-force binning oracle") {
  const GridSpec spec = GridSpec::defaults();
  VoxelHistogramGrid grid(spec);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xy(-45.0, 45.0);  // some outside
  std::uniform_real_distribution<double> z(-2.0, 6.0);
  std::uniform_int_distribution<int> label(0, 16);
  std::vector<AssembledPoint> points;
  for (int i = 0; i < 10000; ++i) {
    points.push_back(at(xy(rng), xy(rng), z(rng),
                        static_cast<ClassId>(label(rng))));
  }
  const auto stats = bin_points(grid, points);

  std::map<std::pair<std::size_t, int>, std::uint32_t> oracle;
  std::uint64_t in_bounds = 0;
  for (const auto& p : points) {
    const int ix =
        static_cast<int>(std::floor((p.position.x() - spec.origin.x()) /
                                    spec.voxel_size));
    const int iy =
        static_cast<int>(std::floor((p.position.y() - spec.origin.y()) /
                                    spec.voxel_size));
    const int iz =
        static_cast<int>(std::floor((p.position.z() - spec.origin.z()) /
                                    spec.voxel_size));
    if (ix < 0 || iy < 0 || iz < 0 || ix >= spec.dims[0] ||
        iy >= spec.dims[1] || iz >= spec.dims[2]) {
      continue;
    }
    ++in_bounds;
    const std::size_t flat =
        (static_cast<std::size_t>(ix) * static_cast<std::size_t>(spec.dims[1]) +
         static_cast<std::size_t>(iy)) *
            static_cast<std::size_t>(spec.dims[2]) +
        static_cast<std::size_t>(iz);
    ++oracle[{flat, p.label}];
  }
  CHECK(stats.binned == in_bounds);
  CHECK(stats.dropped == points.size() - in_bounds);
  for (const auto& [key, count] : oracle) {
    CHECK(grid.hit_count(key.first, static_cast<ClassId>(key.second)) ==
          count);
  }
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < spec.voxel_count(); ++v) {
    total += grid.total_hits(v);
  }
  CHECK(total == in_bounds);
}

TEST_CASE("the shortest beam frees only the origin voxel") {
  const GridSpec spec = small_grid(4, 4, 4);
  VoxelHistogramGrid grid(spec);
  const std::vector<AssembledPoint> points{at(0.6, 0.2, 0.2, kCar)};
  carve_free(grid, points, Eigen::Vector3d(0.2, 0.2, 0.2));
  CHECK(grid.free_count(spec.flat_index({0, 0, 0})) == 1);
  CHECK(grid.free_count(spec.flat_index({1, 0, 0})) == 0);
  std::uint64_t total_free = 0;
  for (std::size_t v = 0; v < spec.voxel_count(); ++v) {
    total_free += grid.free_count(v);
  }
  CHECK(total_free == 1);
}

TEST_CASE("an axis beam frees every crossed voxel but not the return") {
  const GridSpec spec = small_grid(8, 4, 4);
  VoxelHistogramGrid grid(spec);
  const std::vector<AssembledPoint> points{at(1.8, 0.2, 0.2, kManmade)};
  carve_free(grid, points, Eigen::Vector3d(0.2, 0.2, 0.2));
  for (int x = 0; x < 4; ++x) {
    CHECK(grid.free_count(spec.flat_index({x, 0, 0})) == 1);
  }
  CHECK(grid.free_count(spec.flat_index({4, 0, 0})) == 0);
}

TEST_CASE("crossing beams add up") {
  const GridSpec spec = small_grid(8, 4, 4);
  VoxelHistogramGrid grid(spec);
  const std::vector<AssembledPoint> points{at(1.8, 0.2, 0.2, kManmade),
                                           at(1.8, 0.3, 0.2, kManmade)};
  carve_free(grid, points, Eigen::Vector3d(0.2, 0.2, 0.2));
  CHECK(grid.free_count(spec.flat_index({2, 0, 0})) == 2);
}

TEST_CASE("hits outrank free evidence") {
  const GridSpec spec = small_grid(2, 2, 2);
  VoxelHistogramGrid grid(spec);
  const std::size_t voxel = spec.flat_index({0, 0, 0});
  grid.add_hit(voxel, kCar);
  grid.add_hit(voxel, kCar);
  grid.add_hit(voxel, kPedestrian);
  for (int i = 0; i < 5; ++i) {
    grid.add_free(voxel);
  }
  const ResolveResult result = resolve_labels(grid);
  CHECK(result.occupancy.labels[voxel] == kCar);
  // The remaining voxels carry no evidence at all.
  CHECK(result.unobserved == spec.voxel_count() - 1);
  CHECK(result.occupancy.labels[spec.flat_index({1, 1, 1})] == kFreeClass);
}

TEST_CASE("count ties resolve to the lower class id") {
  const GridSpec spec = small_grid(2, 2, 2);
  VoxelHistogramGrid grid(spec);
  const std::size_t voxel = spec.flat_index({1, 0, 1});
  grid.add_hit(voxel, kTruck);
  grid.add_hit(voxel, kTruck);
  grid.add_hit(voxel, kCar);
  grid.add_hit(voxel, kCar);
  CHECK(resolve_labels(grid).occupancy.labels[voxel] == kCar);
}

TEST_CASE("free evidence alone resolves to free and is counted observed") {
  const GridSpec spec = small_grid(2, 2, 2);
  VoxelHistogramGrid grid(spec);
  grid.add_free(spec.flat_index({0, 1, 0}));
  const ResolveResult result = resolve_labels(grid);
  CHECK(result.occupancy.labels[spec.flat_index({0, 1, 0})] == kFreeClass);
  CHECK(result.unobserved == spec.voxel_count() - 1);
  const VoxelMask observed = observed_mask(grid);
  CHECK(observed.count_set() == 1);
  CHECK(observed.flags[spec.flat_index({0, 1, 0})] == 1);
}

TEST_CASE("merging partial histograms resolves like one pass") {
  const GridSpec spec = small_grid(6, 6, 3);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> voxel(
      0, static_cast<int>(spec.voxel_count()) - 1);
  std::uniform_int_distribution<int> label(0, 16);
  std::uniform_int_distribution<int> kind(0, 3);

  VoxelHistogramGrid whole(spec);
  VoxelHistogramGrid part_a(spec);
  VoxelHistogramGrid part_b(spec);
  for (int i = 0; i < 5000; ++i) {
    const auto v = static_cast<std::size_t>(voxel(rng));
    VoxelHistogramGrid& part = (i % 2 == 0) ? part_a : part_b;
    if (kind(rng) == 0) {
      whole.add_free(v);
      part.add_free(v);
    } else {
      const auto l = static_cast<ClassId>(label(rng));
      whole.add_hit(v, l);
      part.add_hit(v, l);
    }
  }
  part_a.merge(part_b);
  const ResolveResult merged = resolve_labels(part_a);
  const ResolveResult direct = resolve_labels(whole);
  CHECK(merged.occupancy.labels == direct.occupancy.labels);
  CHECK(merged.unobserved == direct.unobserved);

  VoxelHistogramGrid other(small_grid(5, 6, 3));
  CHECK_THROWS_AS(part_a.merge(other), EvalError);
}

TEST_CASE("a voxel with same-class neighbors keeps its label") {
  const GridSpec spec = small_grid(3, 3, 3);
  OccupancyGrid grid = OccupancyGrid::empty(spec);
  grid.labels[spec.flat_index({1, 1, 1})] = kCar;
  for (const auto& d : {Eigen::Vector3i(0, 0, 1), Eigen::Vector3i(0, 0, -1),
                        Eigen::Vector3i(0, 1, 0), Eigen::Vector3i(0, -1, 0),
                        Eigen::Vector3i(1, 0, 0), Eigen::Vector3i(-1, 0, 0)}) {
    grid.labels[spec.flat_index(Eigen::Vector3i(1, 1, 1) + d)] = kCar;
  }
  const OccupancyGrid refined = refine_lonely(grid);
  CHECK(refined.labels == grid.labels);
}

TEST_CASE("a lonely pedestrian inside a manmade shell joins it") {
  const GridSpec spec = small_grid(3, 3, 3);
  OccupancyGrid grid = OccupancyGrid::empty(spec);
  for (auto& l : grid.labels) {
    l = kManmade;
  }
  grid.labels[spec.flat_index({1, 1, 1})] = kPedestrian;
  const OccupancyGrid refined = refine_lonely(grid);
  CHECK(refined.labels[spec.flat_index({1, 1, 1})] == kManmade);
  // The shell is untouched: every shell voxel still has manmade neighbors.
  for (std::size_t v = 0; v < spec.voxel_count(); ++v) {
    if (v != spec.flat_index({1, 1, 1})) {
      CHECK(refined.labels[v] == kManmade);
    }
  }
}

TEST_CASE("an isolated voxel dissolves into free space") {
  const GridSpec spec = small_grid(5, 5, 5);
  OccupancyGrid grid = OccupancyGrid::empty(spec);
  grid.labels[spec.flat_index({2, 2, 2})] = kTruck;
  const OccupancyGrid refined = refine_lonely(grid);
  CHECK(refined.labels[spec.flat_index({2, 2, 2})] == kFreeClass);
}

TEST_CASE("refinement reads the input grid, not its own output") {
  // Two adjacent voxels of different classes, each the only occupied
  // neighbor of the other: both must be relabeled using the original
  // neighborhood, so both flip to the other's class in one pass.
  const GridSpec spec = small_grid(4, 3, 3);
  OccupancyGrid grid = OccupancyGrid::empty(spec);
  grid.labels[spec.flat_index({1, 1, 1})] = kCar;
  grid.labels[spec.flat_index({2, 1, 1})] = kTruck;
  const OccupancyGrid refined = refine_lonely(grid);
  CHECK(refined.labels[spec.flat_index({1, 1, 1})] == kTruck);
  CHECK(refined.labels[spec.flat_index({2, 1, 1})] == kCar);
}

TEST_CASE("the camera mask matches a hand-rolled projection") {
  const GridSpec spec = GridSpec::defaults();
  const CameraIntrinsics camera =
      CameraIntrinsics::from_fov(1936, 1216, 64.0 * M_PI / 180.0,
                                 44.0 * M_PI / 180.0);
  // Camera placed near the grid center, optical axis along grid +x.
  Pose camera_to_grid;
  camera_to_grid.rotation << 0, 0, 1, -1, 0, 0, 0, -1, 0;
  camera_to_grid.translation = Eigen::Vector3d(0.2, 0.2, 1.2);

  const VoxelMask mask = fov_mask(spec, camera, camera_to_grid);

  // A center on the optical axis 10 m ahead is visible.
  CHECK(mask.flags[spec.flat_index(
            spec.cell_of(Eigen::Vector3d(10.2, 0.2, 1.2)))] == 1);
  // A center behind the camera is not.
  CHECK(mask.flags[spec.flat_index(
            spec.cell_of(Eigen::Vector3d(-10.2, 0.2, 1.2)))] == 0);

  const Pose grid_to_camera = camera_to_grid.inverse();
  std::size_t mismatches = 0;
  for (std::size_t v = 0; v < spec.voxel_count(); ++v) {
    const Eigen::Vector3d center = spec.center_of(spec.cell_from_flat(v));
    const Eigen::Vector3d cam = grid_to_camera.rotation * center +
                                grid_to_camera.translation;
    bool visible = false;
    if (cam.z() > 1e-6) {
      const double u = camera.fx * cam.x() / cam.z() + camera.cx;
      const double w = camera.fy * cam.y() / cam.z() + camera.cy;
      visible = u >= 0.0 && u < camera.width && w >= 0.0 && w < camera.height;
    }
    mismatches += (mask.flags[v] != 0) != visible;
  }
  CHECK(mismatches == 0);
  CHECK(mask.count_set() > 0);
}

TEST_CASE("occupancy files survive the round trip byte for byte") {
  occtest::TempDir dir("voxg");
  std::mt19937_64 rng(5);
  const GridSpec spec = small_grid(9, 7, 5, 0.25);
  const OccupancyGrid grid = random_occupancy(spec, rng);

  const auto bytes = encode_occupancy_grid(grid);
  const OccupancyGrid decoded = decode_occupancy_grid(bytes, "mem");
  CHECK(decoded.spec.same_layout(spec));
  CHECK(decoded.labels == grid.labels);
  CHECK(encode_occupancy_grid(decoded) == bytes);

  const auto path = dir.path() / "grid.occg";
  write_occupancy_grid(path, grid);
  const OccupancyGrid reread = read_occupancy_grid(path);
  CHECK(encode_occupancy_grid(reread) == bytes);
}

TEST_CASE("grid decoding rejects malformed bytes") {
  const GridSpec spec = small_grid(2, 2, 2);
  OccupancyGrid grid = OccupancyGrid::empty(spec);
  auto bytes = encode_occupancy_grid(grid);

  SUBCASE("bad magic") {
    bytes[0] = 'X';
    CHECK_THROWS_WITH_AS(decode_occupancy_grid(bytes, "mem"),
                         doctest::Contains("bad magic"), FormatError);
  }
  SUBCASE("unsupported version") {
    bytes[4] = 9;
    CHECK_THROWS_WITH_AS(decode_occupancy_grid(bytes, "mem"),
                         doctest::Contains("unsupported version"),
                         FormatError);
  }
  SUBCASE("truncated payload") {
    bytes.pop_back();
    CHECK_THROWS_WITH_AS(decode_occupancy_grid(bytes, "mem"),
                         doctest::Contains("payload holds"), FormatError);
  }
  SUBCASE("label out of range") {
    bytes.back() = 23;
    CHECK_THROWS_WITH_AS(decode_occupancy_grid(bytes, "mem"),
                         doctest::Contains("label 23"), FormatError);
  }
}

TEST_CASE("masks use the same container with 0/1 payload") {
  occtest::TempDir dir("voxm");
  const GridSpec spec = small_grid(3, 4, 2);
  VoxelMask mask = VoxelMask::empty(spec);
  mask.flags[3] = 1;
  mask.flags[17] = 1;

  const auto path = dir.path() / "mask.occm";
  write_voxel_mask(path, mask);
  const VoxelMask reread = read_voxel_mask(path);
  CHECK(reread.spec.same_layout(spec));
  CHECK(reread.flags == mask.flags);
  CHECK(reread.count_set() == 2);

  auto bytes = encode_voxel_mask(mask);
  bytes.back() = 2;
  CHECK_THROWS_WITH_AS(decode_voxel_mask(bytes, "mem"),
                       doctest::Contains("outside {0, 1}"), FormatError);
}

TEST_CASE("the PLY export lists one vertex per occupied voxel") {
  occtest::TempDir dir("voxply");
  const GridSpec spec = small_grid(4, 4, 4);
  OccupancyGrid grid = OccupancyGrid::empty(spec);
  grid.labels[spec.flat_index({0, 0, 0})] = kCar;
  grid.labels[spec.flat_index({3, 2, 1})] = kManmade;
  const auto path = dir.path() / "grid.ply";
  write_occupancy_ply(path, grid);

  std::ifstream in(path, std::ios::binary);
  std::string line;
  std::getline(in, line);
  CHECK(line == "ply");
  bool found = false;
  while (std::getline(in, line) && line != "end_header") {
    if (line.rfind("element vertex ", 0) == 0) {
      CHECK(line == "element vertex 2");
      found = true;
    }
  }
  CHECK(found);
}

TEST_SUITE_END();
