// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/manifest.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "occ/classes.hpp"
#include "occ/errors.hpp"

namespace occ {

namespace {

using nlohmann::json;

json pose_to_json(const Pose& pose) {
  const Eigen::Matrix4d m = pose.matrix();
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(row);
  }
  return rows;
}

Pose pose_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) {
    throw FormatError("manifest field '" + field +
                      "' must be a 4x4 row-major matrix");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 4) {
      throw FormatError("manifest field '" + field +
                        "' must be a 4x4 row-major matrix");
    }
    for (int c = 0; c < 4; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw FormatError("manifest field '" + field +
                          "' contains a non-numeric entry");
      }
      m(r, c) = v.get<double>();
    }
  }
  try {
    return Pose::from_matrix(m);
  } catch (const FormatError& e) {
    throw FormatError("manifest field '" + field + "': " + e.what());
  }
}

const json& require(const json& j, const std::string& key,
                    const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError("manifest is missing field '" + where + key + "'");
  }
  return *it;
}

double require_number(const json& j, const std::string& key,
                      const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) {
    throw FormatError("manifest field '" + where + key + "' must be a number");
  }
  return v.get<double>();
}

}  // namespace

const FrameRecord* SceneManifest::find_frame(int frame_id) const {
  for (const auto& f : frames) {
    if (f.frame_id == frame_id) {
      return &f;
    }
  }
  return nullptr;
}

std::vector<int> SceneManifest::key_frame_ids() const {
  std::vector<int> ids;
  for (const auto& f : frames) {
    if (f.is_key) {
      ids.push_back(f.frame_id);
    }
  }
  return ids;
}

SceneManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError(path.string() + ": cannot open for reading");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }

  SceneManifest m;
  m.base_dir = path.parent_path();

  const json& names = require(j, "class_names", "");
  if (!names.is_array() || names.size() != kNumClasses) {
    throw FormatError("manifest field 'class_names' must list exactly " +
                      std::to_string(kNumClasses) + " names");
  }
  for (const auto& n : names) {
    if (!n.is_string()) {
      throw FormatError("manifest field 'class_names' must contain strings");
    }
    m.class_names.push_back(n.get<std::string>());
  }
  if (m.class_names.back() != "free") {
    throw FormatError(
        "manifest field 'class_names' must reserve the last slot for 'free'");
  }

  const json& cam = require(j, "camera", "");
  m.camera.fx = require_number(cam, "fx", "camera.");
  m.camera.fy = require_number(cam, "fy", "camera.");
  m.camera.cx = require_number(cam, "cx", "camera.");
  m.camera.cy = require_number(cam, "cy", "camera.");
  m.camera.width = static_cast<int>(require_number(cam, "width", "camera."));
  m.camera.height = static_cast<int>(require_number(cam, "height", "camera."));
  if (m.camera.width <= 0 || m.camera.height <= 0 || m.camera.fx <= 0.0 ||
      m.camera.fy <= 0.0) {
    throw FormatError("manifest field 'camera' has non-positive dimensions");
  }

  const json& grid = require(j, "grid", "");
  const json& origin = require(grid, "origin", "grid.");
  if (!origin.is_array() || origin.size() != 3) {
    throw FormatError("manifest field 'grid.origin' must hold 3 numbers");
  }
  for (int a = 0; a < 3; ++a) {
    m.grid.origin[a] = origin[static_cast<std::size_t>(a)].get<double>();
  }
  m.grid.voxel_size = require_number(grid, "voxel_size", "grid.");
  const json& dims = require(grid, "dims", "grid.");
  if (!dims.is_array() || dims.size() != 3) {
    throw FormatError("manifest field 'grid.dims' must hold 3 integers");
  }
  for (int a = 0; a < 3; ++a) {
    m.grid.dims[static_cast<std::size_t>(a)] =
        dims[static_cast<std::size_t>(a)].get<int>();
  }
  try {
    m.grid.validate();
  } catch (const ConfigError& e) {
    throw FormatError("manifest field 'grid': " + std::string(e.what()));
  }

  const json& extr = require(j, "extrinsics", "");
  m.lidar_to_ego =
      pose_from_json(require(extr, "lidar_to_ego", "extrinsics."),
                     "extrinsics.lidar_to_ego");
  m.radar_to_ego =
      pose_from_json(require(extr, "radar_to_ego", "extrinsics."),
                     "extrinsics.radar_to_ego");
  m.camera_to_ego =
      pose_from_json(require(extr, "camera_to_ego", "extrinsics."),
                     "extrinsics.camera_to_ego");

  const json& frames = require(j, "frames", "");
  if (!frames.is_array() || frames.empty()) {
    throw FormatError("manifest field 'frames' must be a non-empty array");
  }
  std::set<int> seen_ids;
  double last_timestamp = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const json& f = frames[i];
    const std::string where = "frames[" + std::to_string(i) + "].";
    FrameRecord rec;
    rec.frame_id = static_cast<int>(require_number(f, "frame_id", where));
    rec.timestamp = require_number(f, "timestamp", where);
    rec.ego_pose =
        pose_from_json(require(f, "ego_pose", where), where + "ego_pose");
    rec.lidar_path = require(f, "lidar", where).get<std::string>();
    rec.radar_path = require(f, "radar", where).get<std::string>();
    rec.image_path = require(f, "image", where).get<std::string>();
    rec.is_key = f.value("is_key", false);
    if (!seen_ids.insert(rec.frame_id).second) {
      throw FormatError("manifest field '" + where +
                        "frame_id' repeats id " +
                        std::to_string(rec.frame_id));
    }
    if (i > 0 && rec.timestamp <= last_timestamp) {
      throw FormatError("manifest field '" + where +
                        "timestamp' must increase strictly");
    }
    last_timestamp = rec.timestamp;
    m.frames.push_back(std::move(rec));
  }

  if (j.contains("seed")) {
    m.seed = j["seed"].get<std::uint64_t>();
  }
  return m;
}

void save_manifest(const SceneManifest& manifest,
                   const std::filesystem::path& path) {
  json j;
  j["class_names"] = manifest.class_names;
  j["camera"] = {{"fx", manifest.camera.fx},   {"fy", manifest.camera.fy},
                 {"cx", manifest.camera.cx},   {"cy", manifest.camera.cy},
                 {"width", manifest.camera.width},
                 {"height", manifest.camera.height}};
  j["grid"] = {
      {"origin",
       {manifest.grid.origin.x(), manifest.grid.origin.y(),
        manifest.grid.origin.z()}},
      {"voxel_size", manifest.grid.voxel_size},
      {"dims", manifest.grid.dims},
  };
  j["extrinsics"] = {
      {"lidar_to_ego", pose_to_json(manifest.lidar_to_ego)},
      {"radar_to_ego", pose_to_json(manifest.radar_to_ego)},
      {"camera_to_ego", pose_to_json(manifest.camera_to_ego)},
  };
  json frames = json::array();
  for (const auto& f : manifest.frames) {
    frames.push_back({
        {"frame_id", f.frame_id},
        {"timestamp", f.timestamp},
        {"ego_pose", pose_to_json(f.ego_pose)},
        {"lidar", f.lidar_path},
        {"radar", f.radar_path},
        {"image", f.image_path},
        {"is_key", f.is_key},
    });
  }
  j["frames"] = std::move(frames);
  if (manifest.seed) {
    j["seed"] = *manifest.seed;
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw FormatError(path.string() + ": cannot open for writing");
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw FormatError(path.string() + ": write failed");
  }
}

}  // namespace occ
