// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "occ/classes.hpp"
#include "occ/depth.hpp"
#include "occ/geometry.hpp"
#include "occ/manifest.hpp"
#include "occ/metrics.hpp"
#include "occ/pipeline.hpp"
#include "occ/synth.hpp"
#include "occ/voxelize.hpp"

namespace py = pybind11;

namespace {

py::array_t<std::uint8_t> labels_array(const occ::OccupancyGrid& grid) {
  const auto& d = grid.spec.dims;
  py::array_t<std::uint8_t> out({d[0], d[1], d[2]});
  std::copy(grid.labels.begin(), grid.labels.end(), out.mutable_data());
  return out;
}

py::dict grid_dict(const occ::OccupancyGrid& grid) {
  py::dict out;
  out["labels"] = labels_array(grid);
  out["origin"] = py::make_tuple(grid.spec.origin.x(), grid.spec.origin.y(),
                                 grid.spec.origin.z());
  out["voxel_size"] = grid.spec.voxel_size;
  return out;
}

py::dict report_dict(const occ::MetricsReport& report) {
  py::dict out;
  py::dict per_class;
  const auto& names = occ::class_names();
  for (int c = 0; c < occ::kNumSemanticClasses; ++c) {
    const auto& v = report.iou[static_cast<std::size_t>(c)];
    per_class[names[static_cast<std::size_t>(c)].c_str()] =
        v ? py::cast(*v) : py::none();
  }
  out["per_class_iou"] = per_class;
  out["miou"] = report.mean_iou ? py::cast(*report.mean_iou) : py::none();
  out["weighted_miou"] = report.weighted_mean_iou
                             ? py::cast(*report.weighted_mean_iou)
                             : py::none();
  out["occupied_iou"] = report.occupied ? py::cast(*report.occupied)
                                        : py::none();
  out["voxels_compared"] = report.voxels_compared;
  return out;
}

occ::PipelineConfig make_config(std::optional<std::string> config_path,
                                int threads, std::optional<int> window) {
  occ::PipelineConfig config;
  if (config_path) {
    config = occ::load_pipeline_config(*config_path);
  }
  if (threads > 0) {
    config.threads = threads;
  }
  if (window) {
    config.accumulation.window = *window;
  }
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Occupancy ground-truth generation and radar fusion toolkit";

  m.def("class_names", [] { return occ::class_names(); },
        "Names of the 17 semantic classes plus 'free'");

  m.def(
      "generate_scene",
      [](const std::string& scenario, std::uint64_t seed,
         const std::string& out_dir) {
        occ::run_synth(scenario, seed, out_dir);
      },
      py::arg("scenario"), py::arg("seed"), py::arg("out_dir"),
      "Write a synthetic scene (manifest, clouds, images, analytic labels)");

  m.def(
      "autolabel",
      [](const std::string& manifest_path, const std::string& out_dir,
         int threads, std::optional<int> window,
         std::optional<std::string> config_path) {
        const occ::SceneManifest manifest = occ::load_manifest(manifest_path);
        const occ::PipelineConfig config =
            make_config(config_path, threads, window);
        const occ::AutolabelStats stats =
            occ::run_autolabel(manifest, config, out_dir, std::nullopt);
        py::dict out;
        out["key_frames"] = stats.key_frames;
        out["points_binned"] = stats.points_binned;
        out["points_dropped"] = stats.points_dropped;
        out["voxels_unobserved"] = stats.voxels_unobserved;
        out["wall_ms"] = stats.wall_ms;
        return out;
      },
      py::arg("manifest"), py::arg("out_dir"), py::arg("threads") = 1,
      py::arg("window") = std::nullopt, py::arg("config") = std::nullopt,
      "Generate occupancy labels for every key frame in the manifest");

  m.def(
      "evaluate",
      [](const std::string& pred_dir, const std::string& gt_dir,
         const std::string& out_dir, std::optional<std::string> mask) {
        std::optional<std::filesystem::path> mask_path;
        if (mask) {
          mask_path = *mask;
        }
        return report_dict(occ::run_eval(pred_dir, gt_dir, mask_path,
                                         out_dir));
      },
      py::arg("pred_dir"), py::arg("gt_dir"), py::arg("out_dir"),
      py::arg("mask") = std::nullopt,
      "Score predicted grids against ground truth of the same file names");

  m.def(
      "make_depth",
      [](const std::string& manifest_path, int frame_id,
         const std::string& mode, const std::string& out_dir,
         std::optional<std::string> config_path) {
        const occ::SceneManifest manifest = occ::load_manifest(manifest_path);
        const occ::PipelineConfig config =
            make_config(config_path, 0, std::nullopt);
        occ::run_depth(manifest, frame_id, occ::depth_mode_from_name(mode),
                       config, out_dir);
      },
      py::arg("manifest"), py::arg("frame"), py::arg("mode"),
      py::arg("out_dir"), py::arg("config") = std::nullopt,
      "Write depth products (lidar-gt, pseudo, rgbd, or bins) for a frame");

  m.def(
      "read_occupancy",
      [](const std::string& path) {
        return grid_dict(occ::read_occupancy_grid(path));
      },
      py::arg("path"),
      "Load an .occg grid as {labels: uint8[nx, ny, nz], origin, voxel_size}");

  m.def(
      "read_depth",
      [](const std::string& path) {
        const occ::DepthImage image = occ::read_depth_image(path);
        py::array_t<float> out({image.height, image.width});
        std::copy(image.depth.begin(), image.depth.end(), out.mutable_data());
        return out;
      },
      py::arg("path"), "Load a .dpth image as float32[height, width]");

  m.def(
      "traverse_ray",
      [](const std::array<double, 3>& origin,
         const std::array<double, 3>& endpoint,
         const std::array<double, 3>& grid_origin, double voxel_size,
         const std::array<int, 3>& dims) {
        occ::GridSpec spec;
        spec.origin = Eigen::Vector3d(grid_origin[0], grid_origin[1],
                                      grid_origin[2]);
        spec.voxel_size = voxel_size;
        spec.dims = dims;
        spec.validate();
        const occ::Ray ray{
            Eigen::Vector3d(origin[0], origin[1], origin[2]),
            Eigen::Vector3d(endpoint[0], endpoint[1], endpoint[2])};
        const occ::RayTraversal result = occ::traverse_ray(spec, ray);
        py::list traversed;
        for (const auto& c : result.traversed) {
          traversed.append(py::make_tuple(c.x(), c.y(), c.z()));
        }
        py::object hit = py::none();
        if (result.hit) {
          hit = py::make_tuple(result.hit->x(), result.hit->y(),
                               result.hit->z());
        }
        return py::make_tuple(traversed, hit);
      },
      py::arg("origin"), py::arg("endpoint"),
      py::arg("grid_origin") = std::array<double, 3>{-40.0, -40.0, -1.0},
      py::arg("voxel_size") = 0.4,
      py::arg("dims") = std::array<int, 3>{200, 200, 16},
      "Voxels crossed by a ray, plus the cell holding the endpoint");
}
