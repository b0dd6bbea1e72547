// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "occ/cloud_io.hpp"
#include "occ/errors.hpp"

namespace occ {

namespace {

// mt19937_64 with hand-rolled mappings so generated scenes are identical
// across standard libraries (distribution implementations vary).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal(double sigma) {
    // Box-Muller; the spare is dropped to keep the call sequence simple.
    double u1 = uniform();
    while (u1 <= 0.0) {
      u1 = uniform();
    }
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

std::optional<double> intersect_primitive(const ScenePrimitive& prim,
                                          const Eigen::Vector3d& origin,
                                          const Eigen::Vector3d& dir,
                                          double t_min, double t_max,
                                          double time) {
  if (prim.kind == ScenePrimitive::Kind::kGroundPlane) {
    if (dir.z() == 0.0) {
      return std::nullopt;
    }
    const double t = (prim.plane_z - origin.z()) / dir.z();
    if (t > t_min && t <= t_max) {
      return t;
    }
    return std::nullopt;
  }
  const Eigen::Vector3d center = prim.center_at(time);
  const Eigen::Vector3d lo = center - prim.box_size / 2.0;
  const Eigen::Vector3d hi = center + prim.box_size / 2.0;
  double t0 = t_min;
  double t1 = t_max;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < lo[a] || origin[a] > hi[a]) {
        return std::nullopt;
      }
      continue;
    }
    double ta = (lo[a] - origin[a]) / dir[a];
    double tb = (hi[a] - origin[a]) / dir[a];
    if (ta > tb) {
      std::swap(ta, tb);
    }
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) {
      return std::nullopt;
    }
  }
  // t0 carries the entry point unless the origin is inside the box.
  if (t0 > t_min) {
    return t0;
  }
  return std::nullopt;
}

}  // namespace

ScenePrimitive ScenePrimitive::ground(double z, ClassId class_id) {
  ScenePrimitive p;
  p.kind = Kind::kGroundPlane;
  p.class_id = class_id;
  p.plane_z = z;
  return p;
}

ScenePrimitive ScenePrimitive::box(const Eigen::Vector3d& center,
                                   const Eigen::Vector3d& size,
                                   ClassId class_id,
                                   const Eigen::Vector3d& velocity) {
  ScenePrimitive p;
  p.kind = Kind::kBox;
  p.class_id = class_id;
  p.box_center = center;
  p.box_size = size;
  p.velocity = velocity;
  return p;
}

bool ScenePrimitive::contains(const Eigen::Vector3d& p, double time) const {
  if (kind == Kind::kGroundPlane) {
    return p.z() < plane_z;
  }
  const Eigen::Vector3d center = center_at(time);
  const Eigen::Vector3d lo = center - box_size / 2.0;
  const Eigen::Vector3d hi = center + box_size / 2.0;
  for (int a = 0; a < 3; ++a) {
    if (p[a] < lo[a] || p[a] >= hi[a]) {
      return false;
    }
  }
  return true;
}

std::optional<SceneHit> intersect_scene(
    std::span<const ScenePrimitive> primitives, const Eigen::Vector3d& origin,
    const Eigen::Vector3d& direction, double t_min, double t_max,
    double time) {
  std::optional<SceneHit> best;
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const auto t = intersect_primitive(primitives[i], origin, direction,
                                       t_min, t_max, time);
    if (t && (!best || *t < best->t)) {
      best = SceneHit{*t, static_cast<int>(i)};
    }
  }
  return best;
}

LabeledCloud simulate_lidar(std::span<const ScenePrimitive> primitives,
                            const Pose& sensor_pose, const BeamPattern& beams,
                            double time) {
  LabeledCloud cloud;
  const Pose sensor_from_world = sensor_pose.inverse();
  const Eigen::Vector3d origin = sensor_pose.translation;
  for (int ring = 0; ring < beams.rings; ++ring) {
    const double s = beams.rings > 1
                         ? static_cast<double>(ring) / (beams.rings - 1)
                         : 0.5;
    const double elev = beams.elev_min + s * (beams.elev_max - beams.elev_min);
    const double cz = std::sin(elev);
    const double cxy = std::cos(elev);
    for (int step = 0; step < beams.azimuth_steps; ++step) {
      const double azimuth =
          2.0 * std::numbers::pi * step / beams.azimuth_steps;
      const Eigen::Vector3d dir_sensor(cxy * std::cos(azimuth),
                                       cxy * std::sin(azimuth), cz);
      const Eigen::Vector3d dir_world = sensor_pose.rotation * dir_sensor;
      const auto hit = intersect_scene(primitives, origin, dir_world, 1e-6,
                                       beams.max_range, time);
      if (!hit) {
        continue;
      }
      const Eigen::Vector3d point_world = origin + hit->t * dir_world;
      const Eigen::Vector3d point_sensor = sensor_from_world.apply(point_world);
      LidarPoint p;
      p.x = static_cast<float>(point_sensor.x());
      p.y = static_cast<float>(point_sensor.y());
      p.z = static_cast<float>(point_sensor.z());
      p.intensity = 0.5f;
      p.label = primitives[static_cast<std::size_t>(hit->primitive)].class_id;
      p.t_offset = 0.0f;
      cloud.push_back(p);
    }
  }
  return cloud;
}

namespace {

// Draws a point on the primitive's surface at the given time. The plane is
// sampled on a disk around the sensor; box faces are drawn by area.
Eigen::Vector3d sample_surface(const ScenePrimitive& prim,
                               const Eigen::Vector3d& sensor, double time,
                               Rng& rng) {
  if (prim.kind == ScenePrimitive::Kind::kGroundPlane) {
    const double radius = 45.0 * std::sqrt(rng.uniform());
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return Eigen::Vector3d(sensor.x() + radius * std::cos(angle),
                           sensor.y() + radius * std::sin(angle),
                           prim.plane_z);
  }
  const Eigen::Vector3d half = prim.box_size / 2.0;
  const double area_x = prim.box_size.y() * prim.box_size.z();
  const double area_y = prim.box_size.x() * prim.box_size.z();
  const double area_z = prim.box_size.x() * prim.box_size.y();
  const double total = 2.0 * (area_x + area_y + area_z);
  double pick = rng.uniform(0.0, total);
  int axis = 2;
  if (pick < 2.0 * area_x) {
    axis = 0;
  } else if (pick < 2.0 * (area_x + area_y)) {
    axis = 1;
    pick -= 2.0 * area_x;
  } else {
    pick -= 2.0 * (area_x + area_y);
  }
  const double side = pick < (axis == 0 ? area_x : axis == 1 ? area_y : area_z)
                          ? -1.0
                          : 1.0;
  Eigen::Vector3d local;
  local[axis] = side * half[axis];
  const int u_axis = (axis + 1) % 3;
  const int v_axis = (axis + 2) % 3;
  local[u_axis] = rng.uniform(-half[u_axis], half[u_axis]);
  local[v_axis] = rng.uniform(-half[v_axis], half[v_axis]);
  return prim.center_at(time) + local;
}

float radar_rcs_for_class(ClassId class_id) {
  return 5.0f + static_cast<float>(class_id);
}

}  // namespace

RadarCloud simulate_radar(std::span<const ScenePrimitive> primitives,
                          const Pose& sensor_pose, int detections_per_object,
                          double noise_sigma, std::uint64_t seed,
                          double time) {
  RadarCloud cloud;
  Rng rng(seed);
  const Pose sensor_from_world = sensor_pose.inverse();
  const Eigen::Vector3d sensor = sensor_pose.translation;
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const ScenePrimitive& prim = primitives[i];
    int kept = 0;
    for (int attempt = 0;
         attempt < detections_per_object * 20 && kept < detections_per_object;
         ++attempt) {
      const Eigen::Vector3d surface = sample_surface(prim, sensor, time, rng);
      const Eigen::Vector3d to_surface = surface - sensor;
      const double dist = to_surface.norm();
      if (dist < 1e-6) {
        continue;
      }
      // Visible iff the segment from the sensor reaches this primitive first.
      const auto hit =
          intersect_scene(primitives, sensor, to_surface, 1e-6, 1.0 + 1e-9,
                          time);
      if (!hit || hit->primitive != static_cast<int>(i) ||
          std::abs(hit->t - 1.0) > 1e-6) {
        continue;
      }
      Eigen::Vector3d noisy = surface;
      if (noise_sigma > 0.0) {
        noisy += Eigen::Vector3d(rng.normal(noise_sigma),
                                 rng.normal(noise_sigma),
                                 rng.normal(noise_sigma));
      }
      const Eigen::Vector3d dir = to_surface / dist;
      const Eigen::Vector3d point_sensor = sensor_from_world.apply(noisy);
      RadarPoint p;
      p.x = static_cast<float>(point_sensor.x());
      p.y = static_cast<float>(point_sensor.y());
      p.z = static_cast<float>(point_sensor.z());
      p.velocity = static_cast<float>(prim.velocity.dot(dir));
      p.rcs = radar_rcs_for_class(prim.class_id);
      p.confidence = 1.0f;
      cloud.push_back(p);
      ++kept;
    }
  }
  return cloud;
}

OccupancyGrid analytic_occupancy(std::span<const ScenePrimitive> primitives,
                                 const GridSpec& grid, double time,
                                 const Pose& grid_to_world) {
  OccupancyGrid out = OccupancyGrid::empty(grid);
  const std::size_t n = grid.voxel_count();
  for (std::size_t v = 0; v < n; ++v) {
    const Eigen::Vector3d center =
        grid_to_world.apply(grid.center_of(grid.cell_from_flat(v)));
    // Later primitives override earlier ones where they overlap.
    for (std::size_t i = primitives.size(); i > 0; --i) {
      if (primitives[i - 1].contains(center, time)) {
        out.labels[v] = primitives[i - 1].class_id;
        break;
      }
    }
  }
  return out;
}

RgbImage render_scene_image(std::span<const ScenePrimitive> primitives,
                            const Pose& camera_pose,
                            const CameraIntrinsics& camera, double time) {
  // Flat per-class shades, sky everywhere else.
  RgbImage img = RgbImage::filled(camera.width, camera.height, 160, 196, 230);
  const Eigen::Vector3d origin = camera_pose.translation;
  for (int row = 0; row < camera.height; ++row) {
    for (int col = 0; col < camera.width; ++col) {
      const Eigen::Vector3d dir_cam = unproject_pixel(
          camera, static_cast<double>(col), static_cast<double>(row), 1.0);
      const Eigen::Vector3d dir_world = camera_pose.rotation * dir_cam;
      const auto hit =
          intersect_scene(primitives, origin, dir_world, 1e-6, 500.0, time);
      if (!hit) {
        continue;
      }
      const ClassId c =
          primitives[static_cast<std::size_t>(hit->primitive)].class_id;
      std::uint8_t* px = img.at(row, col);
      px[0] = static_cast<std::uint8_t>(40 + 12 * c);
      px[1] = static_cast<std::uint8_t>(200 - 9 * c);
      px[2] = static_cast<std::uint8_t>(60 + 7 * c);
    }
  }
  return img;
}

namespace {

// All face planes sit 5 mm inside a voxel boundary of the default 0.4 m
// lattice (x/y boundaries on multiples of 0.4, z boundaries offset by -1.0).
// That keeps the center of every face-cut voxel inside the primitive, so the
// analytic labels and the beam-built labels agree on observable voxels, and
// per-frame motion steps are whole voxels so the alignment holds in every
// frame. See the scenario notes in the README.
ScenePrimitive street_ground() {
  return ScenePrimitive::ground(-0.205, class_id_from_name("driveable_surface"));
}

ScenePrimitive street_wall(double y_lo, double y_hi) {
  const double z_lo = -0.195;
  const double z_hi = 2.195;
  return ScenePrimitive::box(
      Eigen::Vector3d(0.0, (y_lo + y_hi) / 2.0, (z_lo + z_hi) / 2.0),
      Eigen::Vector3d(39.99, y_hi - y_lo, z_hi - z_lo),
      class_id_from_name("manmade"));
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "static-street", "moving-box", "crossing-pedestrian"};
  return names;
}

SyntheticScenario make_scenario(const std::string& name) {
  SyntheticScenario s;
  s.name = name;
  s.frame_count = 7;
  s.frame_dt = 0.25;
  s.key_frames = {2, 3, 4};
  if (name == "static-street") {
    s.primitives = {street_ground(), street_wall(6.005, 7.995),
                    street_wall(-7.995, -6.005)};
    s.ego_velocity = Eigen::Vector3d(3.2, 0.0, 0.0);
  } else if (name == "moving-box") {
    s.primitives = {street_ground(),
                    ScenePrimitive::box(
                        Eigen::Vector3d(12.2, -2.0, 0.8),
                        Eigen::Vector3d(4.39, 1.59, 1.99),
                        class_id_from_name("car"),
                        Eigen::Vector3d(0.0, 1.6, 0.0))};
    s.ego_velocity = Eigen::Vector3d::Zero();
  } else if (name == "crossing-pedestrian") {
    s.primitives = {street_ground(), street_wall(6.005, 7.995),
                    ScenePrimitive::box(
                        Eigen::Vector3d(8.4, 5.6, 0.6),
                        Eigen::Vector3d(0.79, 0.79, 1.59),
                        class_id_from_name("pedestrian"),
                        Eigen::Vector3d(0.0, -1.6, 0.0))};
    s.ego_velocity = Eigen::Vector3d(1.6, 0.0, 0.0);
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return s;
}

namespace {

std::string frame_file(const char* stem, int frame_id, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06d.%s", stem, frame_id, ext);
  return buf;
}

Pose camera_mount() {
  // Camera axes (x right, y down, z forward) expressed in the ego frame
  // (x forward, y left, z up).
  Pose p;
  p.rotation << 0.0, 0.0, 1.0,
                -1.0, 0.0, 0.0,
                0.0, -1.0, 0.0;
  p.translation = Eigen::Vector3d(0.5, 0.0, 1.2);
  return p;
}

}  // namespace

void generate_scene(const SyntheticScenario& scenario, std::uint64_t seed,
                    const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "clouds");
  fs::create_directories(out_dir / "images");
  fs::create_directories(out_dir / "gt");

  SceneManifest manifest;
  const auto& names = class_names();
  manifest.class_names.assign(names.begin(), names.end());
  manifest.camera = CameraIntrinsics::from_fov(
      1936, 1216, 64.0 * std::numbers::pi / 180.0,
      44.0 * std::numbers::pi / 180.0);
  manifest.grid = GridSpec::defaults();
  manifest.lidar_to_ego.translation = Eigen::Vector3d(0.0, 0.0, 1.5);
  manifest.radar_to_ego.translation = Eigen::Vector3d(2.0, 0.0, 0.5);
  manifest.camera_to_ego = camera_mount();
  manifest.seed = seed;
  manifest.base_dir = out_dir;

  // Rendered images ship at the working resolution the fusion inputs use.
  const int image_width = 704;
  const int image_height = 256;
  const CameraIntrinsics working = manifest.camera.scaled(
      static_cast<double>(image_width) / manifest.camera.width,
      static_cast<double>(image_height) / manifest.camera.height);

  for (int f = 0; f < scenario.frame_count; ++f) {
    const double time = scenario.frame_dt * f;
    Pose ego;
    ego.translation = scenario.ego_velocity * time;

    FrameRecord rec;
    rec.frame_id = f;
    rec.timestamp = time;
    rec.ego_pose = ego;
    rec.lidar_path = "clouds/" + frame_file("lidar", f, "ocpc");
    rec.radar_path = "clouds/" + frame_file("radar", f, "ocpc");
    rec.image_path = "images/" + frame_file("image", f, "ppm");
    rec.is_key = std::find(scenario.key_frames.begin(),
                           scenario.key_frames.end(),
                           f) != scenario.key_frames.end();

    const Pose lidar_pose = ego * manifest.lidar_to_ego;
    const LabeledCloud lidar =
        simulate_lidar(scenario.primitives, lidar_pose, scenario.beams, time);
    write_lidar_cloud(out_dir / rec.lidar_path, lidar);

    const Pose radar_pose = ego * manifest.radar_to_ego;
    const std::uint64_t frame_seed =
        seed ^ (0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(f) + 1));
    const RadarCloud radar = simulate_radar(
        scenario.primitives, radar_pose, scenario.radar_detections_per_object,
        scenario.radar_noise_sigma, frame_seed, time);
    write_radar_cloud(out_dir / rec.radar_path, radar);

    const Pose camera_pose = ego * manifest.camera_to_ego;
    write_ppm(out_dir / rec.image_path,
              render_scene_image(scenario.primitives, camera_pose, working,
                                 time));

    if (rec.is_key) {
      const OccupancyGrid gt = analytic_occupancy(scenario.primitives,
                                                  manifest.grid, time, ego);
      write_occupancy_grid(out_dir / "gt" / frame_file("occ", f, "occg"), gt);
    }

    manifest.frames.push_back(std::move(rec));
  }

  save_manifest(manifest, out_dir / "manifest.json");
}

}  // namespace occ
