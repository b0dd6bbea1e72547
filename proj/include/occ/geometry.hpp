// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace occ {

/// Rigid SE(3) transform. `rotation` must stay orthonormal with determinant
/// +1; everything downstream (pose inversion, ray casting, ego compensation)
/// assumes it.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return Pose{}; }

  /// Builds a pose from a 4x4 homogeneous matrix. Throws FormatError when the
  /// bottom row is not (0,0,0,1) or the rotation block is not rigid.
  static Pose from_matrix(const Eigen::Matrix4d& m);

  Eigen::Matrix4d matrix() const;
  Pose inverse() const;

  /// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
  Pose operator*(const Pose& rhs) const;

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  bool is_rigid(double tol = 1e-9) const;
};

/// Interpolates between two poses: translation linearly, rotation along the
/// geodesic. s=0 yields `a`, s=1 yields `b`; s outside [0,1] extrapolates.
Pose interpolate_pose(const Pose& a, const Pose& b, double s);

std::vector<Eigen::Vector3d> transform_points(
    const Pose& pose, std::span<const Eigen::Vector3d> points);

/// Pinhole camera model for a rectified image. Focal lengths and the
/// principal point are in pixels.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  /// Intrinsics of a centered pinhole with the given fields of view (radians).
  static CameraIntrinsics from_fov(int width, int height, double hfov,
                                   double vfov);

  /// Rescales for a resized image; sx = new_width / width and likewise sy.
  CameraIntrinsics scaled(double sx, double sy) const;

  bool in_image(double u, double v) const {
    return u >= 0.0 && u < static_cast<double>(width) && v >= 0.0 &&
           v < static_cast<double>(height);
  }
};

struct ProjectedPixel {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

/// Projects a camera-frame point (z forward). Returns nullopt for points at
/// or behind the image plane (z <= 1e-6). The pixel may fall outside the
/// image bounds; callers check with in_image().
std::optional<ProjectedPixel> project_point(const CameraIntrinsics& k,
                                            const Eigen::Vector3d& p);

/// Inverse of project_point for a given depth (z > 0).
Eigen::Vector3d unproject_pixel(const CameraIntrinsics& k, double u, double v,
                                double depth);

/// Axis-aligned dense voxel grid. Cells are half-open boxes
/// [origin + i*s, origin + (i+1)*s) per axis; a point on a shared face
/// belongs to the higher-index cell (floor convention).
struct GridSpec {
  Eigen::Vector3d origin{-40.0, -40.0, -1.0};
  double voxel_size = 0.4;
  std::array<int, 3> dims{200, 200, 16};

  static GridSpec defaults() { return GridSpec{}; }

  /// Throws ConfigError when voxel_size or dims are not positive.
  void validate() const;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) *
           static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }

  Eigen::Vector3d max_corner() const {
    return origin + voxel_size * Eigen::Vector3d(dims[0], dims[1], dims[2]);
  }

  /// Cell containing a point; may be out of bounds for points off the grid.
  Eigen::Vector3i cell_of(const Eigen::Vector3d& p) const {
    const Eigen::Vector3d rel = (p - origin) / voxel_size;
    return Eigen::Vector3i(static_cast<int>(std::floor(rel.x())),
                           static_cast<int>(std::floor(rel.y())),
                           static_cast<int>(std::floor(rel.z())));
  }

  bool in_bounds(const Eigen::Vector3i& c) const {
    return c.x() >= 0 && c.x() < dims[0] && c.y() >= 0 && c.y() < dims[1] &&
           c.z() >= 0 && c.z() < dims[2];
  }

  bool contains(const Eigen::Vector3d& p) const {
    return in_bounds(cell_of(p));
  }

  /// Flat storage index with z fastest: (x * Ny + y) * Nz + z.
  std::size_t flat_index(const Eigen::Vector3i& c) const {
    return (static_cast<std::size_t>(c.x()) * dims[1] +
            static_cast<std::size_t>(c.y())) *
               dims[2] +
           static_cast<std::size_t>(c.z());
  }

  Eigen::Vector3i cell_from_flat(std::size_t i) const {
    const int z = static_cast<int>(i % dims[2]);
    const std::size_t xy = i / dims[2];
    const int y = static_cast<int>(xy % dims[1]);
    const int x = static_cast<int>(xy / dims[1]);
    return Eigen::Vector3i(x, y, z);
  }

  Eigen::Vector3d center_of(const Eigen::Vector3i& c) const {
    return origin + voxel_size * (c.cast<double>() +
                                  Eigen::Vector3d::Constant(0.5));
  }

  bool same_layout(const GridSpec& o, double tol = 1e-6) const {
    return dims == o.dims && std::abs(voxel_size - o.voxel_size) <= tol &&
           (origin - o.origin).cwiseAbs().maxCoeff() <= tol;
  }
};

/// Finite beam segment from a sensor origin to a measured return.
struct Ray {
  Eigen::Vector3d origin;
  Eigen::Vector3d endpoint;
};

struct RayTraversal {
  /// Cells crossed by the open segment [origin, endpoint), in traversal
  /// order, excluding the hit cell.
  std::vector<Eigen::Vector3i> traversed;
  /// Cell containing the endpoint, when the endpoint lies inside the grid.
  std::optional<Eigen::Vector3i> hit;
};

/// Walks a beam through the grid (Amanatides & Woo style DDA). Boundary
/// crossings that coincide on several axes step x, then y, then z. A ray
/// that never overlaps the grid yields an empty traversal.
RayTraversal traverse_ray(const GridSpec& grid, const Ray& ray);

}  // namespace occ
