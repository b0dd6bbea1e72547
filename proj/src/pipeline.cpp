// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "occ/cloud_io.hpp"
#include "occ/errors.hpp"

namespace occ {

namespace {

using nlohmann::json;

std::string frame_file(const char* stem, int frame_id, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06d.%s", stem, frame_id, ext);
  return buf;
}

GridSpec grid_from_json(const json& j) {
  GridSpec grid;
  for (const auto& [key, value] : j.items()) {
    if (key == "origin") {
      if (!value.is_array() || value.size() != 3) {
        throw ConfigError("config field 'grid.origin' must hold 3 numbers");
      }
      for (int a = 0; a < 3; ++a) {
        grid.origin[a] = value[static_cast<std::size_t>(a)].get<double>();
      }
    } else if (key == "voxel_size") {
      grid.voxel_size = value.get<double>();
    } else if (key == "dims") {
      if (!value.is_array() || value.size() != 3) {
        throw ConfigError("config field 'grid.dims' must hold 3 integers");
      }
      for (int a = 0; a < 3; ++a) {
        grid.dims[static_cast<std::size_t>(a)] =
            value[static_cast<std::size_t>(a)].get<int>();
      }
    } else {
      throw ConfigError("config field 'grid." + key + "' is not recognized");
    }
  }
  grid.validate();
  return grid;
}

std::set<ClassId> dynamic_classes_from_json(const json& j) {
  if (!j.is_array()) {
    throw ConfigError(
        "config field 'dynamic_classes' must be an array of names or ids");
  }
  std::set<ClassId> classes;
  for (const auto& entry : j) {
    if (entry.is_string()) {
      classes.insert(class_id_from_name(entry.get<std::string>()));
    } else if (entry.is_number_integer()) {
      const int id = entry.get<int>();
      if (id < 0 || id >= kNumSemanticClasses) {
        throw ConfigError("config field 'dynamic_classes' id " +
                          std::to_string(id) + " outside [0, 16]");
      }
      classes.insert(static_cast<ClassId>(id));
    } else {
      throw ConfigError(
          "config field 'dynamic_classes' must hold names or ids");
    }
  }
  return classes;
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string() + ": cannot open for reading");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError(path.string() + ": config root must be an object");
  }

  PipelineConfig config;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "grid") {
        config.grid = grid_from_json(value);
      } else if (key == "window") {
        config.accumulation.window = value.get<int>();
        if (config.accumulation.window < 0) {
          throw ConfigError("config field 'window' must be >= 0");
        }
      } else if (key == "dynamic_classes") {
        config.accumulation.dynamic_classes = dynamic_classes_from_json(value);
      } else if (key == "depth") {
        for (const auto& [dkey, dvalue] : value.items()) {
          if (dkey == "d_min") {
            config.depth_binning.d_min = dvalue.get<double>();
          } else if (dkey == "d_max") {
            config.depth_binning.d_max = dvalue.get<double>();
          } else if (dkey == "bins") {
            config.depth_binning.bins = dvalue.get<int>();
          } else {
            throw ConfigError("config field 'depth." + dkey +
                              "' is not recognized");
          }
        }
        if (config.depth_binning.bins < 1 ||
            !(config.depth_binning.d_max > config.depth_binning.d_min)) {
          throw ConfigError("config field 'depth' needs bins >= 1 and "
                            "d_max > d_min");
        }
      } else if (key == "stride") {
        config.stride = value.get<int>();
        if (config.stride < 1) {
          throw ConfigError("config field 'stride' must be >= 1");
        }
      } else if (key == "working_resolution") {
        if (!value.is_array() || value.size() != 2) {
          throw ConfigError(
              "config field 'working_resolution' must be [width, height]");
        }
        config.working_width = value[0].get<int>();
        config.working_height = value[1].get<int>();
        if (config.working_width < 1 || config.working_height < 1) {
          throw ConfigError(
              "config field 'working_resolution' must be positive");
        }
      } else if (key == "threads") {
        config.threads = value.get<int>();
        if (config.threads < 1) {
          throw ConfigError("config field 'threads' must be >= 1");
        }
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "export_ply") {
        config.export_ply = value.get<bool>();
      } else {
        throw ConfigError("config field '" + key + "' is not recognized");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config;
}

KeyFrameResult autolabel_key_frame(const SceneManifest& manifest,
                                   int key_frame_id,
                                   const PipelineConfig& config) {
  const GridSpec grid = config.grid.value_or(manifest.grid);
  const AssembledScene scene =
      assemble_scene(manifest, key_frame_id, config.accumulation);

  KeyFrameResult result{key_frame_id, VoxelHistogramGrid(grid),
                        OccupancyGrid{}, VoxelMask{}, BinStats{}, 0};
  result.bin_stats = bin_points(result.histogram, scene.points);
  carve_free(result.histogram, scene);
  ResolveResult resolved = resolve_labels(result.histogram);
  result.occupancy = refine_lonely(resolved.occupancy);
  result.observed = observed_mask(result.histogram);
  result.unobserved = resolved.unobserved;
  return result;
}

AutolabelStats run_autolabel(const SceneManifest& manifest,
                             const PipelineConfig& config,
                             const std::filesystem::path& out_dir,
                             const std::optional<FrameRange>& frames) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> key_ids;
  for (const int id : manifest.key_frame_ids()) {
    if (!frames || frames->contains(id)) {
      key_ids.push_back(id);
    }
  }
  if (key_ids.empty()) {
    throw ConfigError("run_autolabel: no key frames match the frame filter");
  }
  std::filesystem::create_directories(out_dir);

  AutolabelStats stats;
  stats.key_frames = key_ids.size();

  // Key frames are independent, so the pool hands each one to a worker and
  // the outputs cannot depend on the thread count.
  std::atomic<std::size_t> next{0};
  std::mutex stats_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= key_ids.size()) {
        return;
      }
      try {
        const KeyFrameResult result =
            autolabel_key_frame(manifest, key_ids[i], config);
        write_occupancy_grid(
            out_dir / frame_file("occ", result.frame_id, "occg"),
            result.occupancy);
        write_voxel_mask(
            out_dir / frame_file("observed", result.frame_id, "occm"),
            result.observed);
        if (config.export_ply) {
          write_occupancy_ply(
              out_dir / frame_file("occ", result.frame_id, "ply"),
              result.occupancy);
        }
        std::lock_guard<std::mutex> lock(stats_mutex);
        stats.points_binned += result.bin_stats.binned;
        stats.points_dropped += result.bin_stats.dropped;
        stats.voxels_unobserved += result.unobserved;
      } catch (...) {
        std::lock_guard<std::mutex> lock(stats_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        return;
      }
    }
  };

  const int thread_count =
      std::min<int>(config.threads, static_cast<int>(key_ids.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  stats.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();

  json j;
  j["key_frames"] = stats.key_frames;
  j["points_binned"] = stats.points_binned;
  j["points_dropped"] = stats.points_dropped;
  j["voxels_unobserved"] = stats.voxels_unobserved;
  j["wall_ms"] = stats.wall_ms;
  std::ofstream out(out_dir / "stats.json", std::ios::trunc);
  out << j.dump(2) << "\n";
  return stats;
}

MetricsReport run_eval(const std::filesystem::path& pred_dir,
                       const std::filesystem::path& gt_dir,
                       const std::optional<std::filesystem::path>& mask_path,
                       const std::filesystem::path& out_dir) {
  auto list_grids = [](const std::filesystem::path& dir) {
    std::vector<std::string> names;
    if (!std::filesystem::is_directory(dir)) {
      throw EvalError("run_eval: '" + dir.string() + "' is not a directory");
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".occg") {
        names.push_back(entry.path().filename().string());
      }
    }
    std::sort(names.begin(), names.end());
    return names;
  };

  const auto pred_names = list_grids(pred_dir);
  const auto gt_names = list_grids(gt_dir);
  if (pred_names.empty()) {
    throw EvalError("run_eval: no .occg grids under '" + pred_dir.string() +
                    "'");
  }
  if (pred_names != gt_names) {
    std::string detail;
    for (const auto& n : pred_names) {
      if (!std::binary_search(gt_names.begin(), gt_names.end(), n)) {
        detail += " prediction '" + n + "' has no ground truth;";
      }
    }
    for (const auto& n : gt_names) {
      if (!std::binary_search(pred_names.begin(), pred_names.end(), n)) {
        detail += " ground truth '" + n + "' has no prediction;";
      }
    }
    throw EvalError("run_eval: frame sets differ:" + detail);
  }

  std::optional<VoxelMask> mask;
  if (mask_path) {
    mask = read_voxel_mask(*mask_path);
  }

  ConfusionCounts totals;
  for (const auto& name : pred_names) {
    const OccupancyGrid pred = read_occupancy_grid(pred_dir / name);
    const OccupancyGrid gt = read_occupancy_grid(gt_dir / name);
    totals += accumulate_confusion(pred, gt, mask ? &*mask : nullptr);
  }

  const MetricsReport report = compute_report(totals);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "report.json", std::ios::trunc);
    out << report_to_json(report).dump(2) << "\n";
  }
  {
    std::ofstream out(out_dir / "report.txt", std::ios::trunc);
    out << format_report_table(report);
  }
  return report;
}

DepthMode depth_mode_from_name(const std::string& name) {
  if (name == "lidar-gt") {
    return DepthMode::kLidarGt;
  }
  if (name == "pseudo") {
    return DepthMode::kPseudo;
  }
  if (name == "rgbd") {
    return DepthMode::kRgbd;
  }
  if (name == "bins") {
    return DepthMode::kBins;
  }
  throw ConfigError("unknown depth mode '" + name + "'");
}

namespace {

DepthImage lidar_depth_for_frame(const SceneManifest& manifest,
                                 const FrameRecord& frame,
                                 const CameraIntrinsics& working) {
  const LabeledCloud cloud =
      read_lidar_cloud(manifest.resolve(frame.lidar_path));
  std::vector<Eigen::Vector3d> points;
  points.reserve(cloud.size());
  for (const auto& p : cloud) {
    points.push_back(p.position());
  }
  const Pose lidar_to_camera =
      manifest.camera_to_ego.inverse() * manifest.lidar_to_ego;
  return project_depth_map(points, working, lidar_to_camera, working.width,
                           working.height);
}

}  // namespace

void run_depth(const SceneManifest& manifest, int frame_id, DepthMode mode,
               const PipelineConfig& config,
               const std::filesystem::path& out_dir) {
  const FrameRecord* frame = manifest.find_frame(frame_id);
  if (!frame) {
    throw ConfigError("run_depth: manifest has no frame with id " +
                      std::to_string(frame_id));
  }
  std::filesystem::create_directories(out_dir);

  const CameraIntrinsics working = manifest.camera.scaled(
      static_cast<double>(config.working_width) / manifest.camera.width,
      static_cast<double>(config.working_height) / manifest.camera.height);
  const Pose radar_to_camera =
      manifest.camera_to_ego.inverse() * manifest.radar_to_ego;

  switch (mode) {
    case DepthMode::kLidarGt: {
      write_depth_image(out_dir / frame_file("depth", frame_id, "dpth"),
                        lidar_depth_for_frame(manifest, *frame, working));
      break;
    }
    case DepthMode::kPseudo: {
      const RadarCloud radar =
          read_radar_cloud(manifest.resolve(frame->radar_path));
      write_depth_image(
          out_dir / frame_file("pseudo", frame_id, "dpth"),
          make_pseudo_depth(radar, radar_to_camera, working, config.stride));
      break;
    }
    case DepthMode::kRgbd: {
      const RadarCloud radar =
          read_radar_cloud(manifest.resolve(frame->radar_path));
      const RgbImage image = read_ppm(manifest.resolve(frame->image_path));
      const RgbdImage rgbd = make_rgbd(image, radar, radar_to_camera, working);
      write_ppm(out_dir / frame_file("rgbd", frame_id, "ppm"), image);
      write_depth_image(out_dir / frame_file("rgbd", frame_id, "dpth"),
                        rgbd.depth);
      break;
    }
    case DepthMode::kBins: {
      const DepthImage depth =
          lidar_depth_for_frame(manifest, *frame, working);
      write_depth_bin_map(out_dir / frame_file("bins", frame_id, "dbin"),
                          bin_depth(depth, config.depth_binning));
      break;
    }
  }
}

void run_synth(const std::string& scenario_name, std::uint64_t seed,
               const std::filesystem::path& out_dir) {
  generate_scene(make_scenario(scenario_name), seed, out_dir);
}

void run_fov_mask(const SceneManifest& manifest, const PipelineConfig& config,
                  const std::filesystem::path& out_dir) {
  const GridSpec grid = config.grid.value_or(manifest.grid);
  std::filesystem::create_directories(out_dir);
  write_voxel_mask(out_dir / "fovmask.occm",
                   fov_mask(grid, manifest.camera, manifest.camera_to_ego));
}

}  // namespace occ
