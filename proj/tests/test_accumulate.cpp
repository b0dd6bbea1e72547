// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <tuple>

#include "occ/accumulate.hpp"
#include "occ/cloud_io.hpp"
#include "occ/errors.hpp"
#include "testutil.hpp"

using namespace occ;

namespace {

LidarPoint lidar_point(float x, float y, float z, ClassId label) {
  LidarPoint p;
  p.x = x;
  p.y = y;
  p.z = z;
  p.intensity = 0.5f;
  p.label = label;
  p.t_offset = 0.0f;
  return p;
}

using PointKey = std::tuple<float, float, float, float, int, float>;

PointKey key_of(const LidarPoint& p) {
  return {p.x, p.y, p.z, p.intensity, p.label, p.t_offset};
}

std::vector<PointKey> sorted_keys(const LabeledCloud& cloud) {
  std::vector<PointKey> keys;
  keys.reserve(cloud.size());
  for (const auto& p : cloud) {
    keys.push_back(key_of(p));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

TEST_SUITE_BEGIN("accumulate");

TEST_CASE("empty dynamic set sends everything to the static half") {
  AccumulationConfig config;
  config.dynamic_classes.clear();
  LabeledCloud cloud{lidar_point(1, 0, 0, 4), lidar_point(2, 0, 0, 15)};
  const auto [dynamic, stat] = split_dynamic(cloud, config);
  CHECK(dynamic.empty());
  CHECK(stat.size() == cloud.size());
}

TEST_CASE("split keeps exactly the configured movers") {
  AccumulationConfig config;
  config.dynamic_classes = {4, 7};  // car, pedestrian
  LabeledCloud cloud{lidar_point(1, 0, 0, 4), lidar_point(2, 0, 0, 15),
                     lidar_point(3, 0, 0, 7), lidar_point(4, 0, 0, 4)};
  const auto [dynamic, stat] = split_dynamic(cloud, config);
  REQUIRE(dynamic.size() == 3);
  CHECK(dynamic[0].x == 1.0f);
  CHECK(dynamic[1].x == 3.0f);
  CHECK(dynamic[2].x == 4.0f);
  REQUIRE(stat.size() == 1);
  CHECK(stat[0].label == 15);
}

TEST_CASE("split halves reassemble the input as a multiset") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<float> coord(-10.0f, 10.0f);
  std::uniform_int_distribution<int> label(0, 16);
  LabeledCloud cloud;
  for (int i = 0; i < 500; ++i) {
    cloud.push_back(lidar_point(coord(rng), coord(rng), coord(rng),
                                static_cast<ClassId>(label(rng))));
  }
  const AccumulationConfig config;  // default dynamic classes
  const auto [dynamic, stat] = split_dynamic(cloud, config);
  CHECK(dynamic.size() + stat.size() == cloud.size());
  LabeledCloud merged = dynamic;
  merged.insert(merged.end(), stat.begin(), stat.end());
  CHECK(sorted_keys(merged) == sorted_keys(cloud));
  for (const auto& p : dynamic) {
    CHECK(config.dynamic_classes.count(p.label) == 1);
  }
  for (const auto& p : stat) {
    CHECK(config.dynamic_classes.count(p.label) == 0);
  }
}

TEST_CASE("window zero assembles just the key frame") {
  occtest::TempDir dir("accum");
  SceneManifest m = occtest::base_manifest(dir.path());
  m.frames.push_back(occtest::make_frame(0, 0.0, Pose::identity(), true));
  m.frames.push_back(
      occtest::make_frame(1, 0.25, occtest::translation(2.0, 0.0, 0.0),
                          false));
  const LabeledCloud key_cloud{lidar_point(1, 2, 0, 15),
                               lidar_point(4, -1, 1, 4)};
  const LabeledCloud other_cloud{lidar_point(9, 9, 0, 15)};
  write_lidar_cloud(m.resolve(m.frames[0].lidar_path), key_cloud);
  write_lidar_cloud(m.resolve(m.frames[1].lidar_path), other_cloud);

  AccumulationConfig config;
  config.window = 0;
  const AssembledScene scene = assemble_scene(m, 0, config);
  REQUIRE(scene.points.size() == 2);
  REQUIRE(scene.frames.size() == 1);
  CHECK(scene.frames[0].frame_id == 0);
  CHECK(scene.frames[0].begin == 0);
  CHECK(scene.frames[0].end == 2);
  CHECK(scene.frames[0].sensor_origin.norm() < 1e-12);
  // Identity ego and extrinsics: assembled positions equal the file values,
  // dynamic (car) points included since this is the key frame.
  CHECK((scene.points[0].position - Eigen::Vector3d(1, 2, 0)).norm() < 1e-6);
  CHECK((scene.points[1].position - Eigen::Vector3d(4, -1, 1)).norm() < 1e-6);
  CHECK(scene.points[1].label == 4);
}

TEST_CASE("a world-fixed wall point lands in one place from two frames") {
  occtest::TempDir dir("accum");
  SceneManifest m = occtest::base_manifest(dir.path());
  m.frames.push_back(occtest::make_frame(0, 0.0, Pose::identity(), true));
  m.frames.push_back(
      occtest::make_frame(1, 0.25, occtest::translation(2.0, 0.0, 0.0),
                          false));
  // The wall sits at world (10, 3, 1). Each frame sees it from its own ego
  // position.
  write_lidar_cloud(m.resolve(m.frames[0].lidar_path),
                    {lidar_point(10, 3, 1, 15)});
  write_lidar_cloud(m.resolve(m.frames[1].lidar_path),
                    {lidar_point(8, 3, 1, 15)});

  AccumulationConfig config;
  config.window = 1;
  const AssembledScene scene = assemble_scene(m, 0, config);
  REQUIRE(scene.points.size() == 2);
  CHECK((scene.points[0].position - scene.points[1].position).norm() < 1e-6);
  CHECK((scene.points[0].position - Eigen::Vector3d(10, 3, 1)).norm() < 1e-6);
  REQUIRE(scene.frames.size() == 2);
  CHECK(scene.frames[0].frame_id == 0);
  CHECK(scene.frames[1].frame_id == 1);
  CHECK((scene.frames[1].sensor_origin - Eigen::Vector3d(2, 0, 0)).norm() <
        1e-12);
}

TEST_CASE("dynamic points survive only from the key frame") {
  occtest::TempDir dir("accum");
  SceneManifest m = occtest::base_manifest(dir.path());
  m.frames.push_back(occtest::make_frame(0, 0.0, Pose::identity(), true));
  m.frames.push_back(
      occtest::make_frame(1, 0.25, Pose::identity(), false));
  write_lidar_cloud(m.resolve(m.frames[0].lidar_path),
                    {lidar_point(1, 0, 0, 4), lidar_point(2, 0, 0, 15)});
  write_lidar_cloud(m.resolve(m.frames[1].lidar_path),
                    {lidar_point(5, 0, 0, 4), lidar_point(6, 0, 0, 15)});

  const AssembledScene scene = assemble_scene(m, 0, AccumulationConfig{});
  // Key frame contributes both points; the neighbor only its static one.
  REQUIRE(scene.points.size() == 3);
  CHECK(scene.points[0].label == 4);
  CHECK(scene.points[0].position.x() == doctest::Approx(1.0));
  CHECK(scene.points[1].label == 15);
  CHECK(scene.points[2].label == 15);
  CHECK(scene.points[2].position.x() == doctest::Approx(6.0));
}

TEST_CASE("assembled count follows the window bookkeeping") {
  occtest::TempDir dir("accum");
  SceneManifest m = occtest::base_manifest(dir.path());
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<float> coord(-20.0f, 20.0f);
  std::uniform_int_distribution<int> label(0, 16);
  const AccumulationConfig config;  // window 10, default movers

  std::size_t expected = 0;
  const int key_id = 2;
  for (int f = 0; f < 5; ++f) {
    m.frames.push_back(occtest::make_frame(
        f, 0.25 * f, occtest::translation(0.5 * f, 0.0, 0.0), f == key_id));
    LabeledCloud cloud;
    for (int i = 0; i < 100; ++i) {
      cloud.push_back(lidar_point(coord(rng), coord(rng), coord(rng),
                                  static_cast<ClassId>(label(rng))));
    }
    write_lidar_cloud(m.resolve(m.frames.back().lidar_path), cloud);
    if (f == key_id) {
      expected += cloud.size();
    } else {
      for (const auto& p : cloud) {
        if (config.dynamic_classes.count(p.label) == 0) {
          ++expected;
        }
      }
    }
  }
  const AssembledScene scene = assemble_scene(m, key_id, config);
  CHECK(scene.points.size() == expected);
  REQUIRE(scene.frames.size() == 5);
  // Contributions tile the assembled cloud without gaps.
  std::size_t cursor = 0;
  for (const auto& c : scene.frames) {
    CHECK(c.begin == cursor);
    CHECK(c.end >= c.begin);
    cursor = c.end;
  }
  CHECK(cursor == scene.points.size());
}

TEST_CASE("unknown key frame and missing files raise FormatError") {
  occtest::TempDir dir("accum");
  SceneManifest m = occtest::base_manifest(dir.path());
  m.frames.push_back(occtest::make_frame(0, 0.0, Pose::identity(), true));
  CHECK_THROWS_AS(assemble_scene(m, 7, AccumulationConfig{}), FormatError);
  // Frame 0 exists but its cloud file was never written.
  CHECK_THROWS_WITH_AS(assemble_scene(m, 0, AccumulationConfig{}),
                       doctest::Contains("frame 0"), FormatError);
}

TEST_SUITE_END();
