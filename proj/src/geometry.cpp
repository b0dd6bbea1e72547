// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "occ/geometry.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Geometry>

#include "occ/errors.hpp"

namespace occ {

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
  if ((m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() >
      1e-12) {
    throw FormatError("pose matrix bottom row is not (0, 0, 0, 1)");
  }
  Pose p;
  p.rotation = m.topLeftCorner<3, 3>();
  p.translation = m.topRightCorner<3, 1>();
  if (!p.is_rigid()) {
    throw FormatError("pose rotation block is not orthonormal");
  }
  return p;
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose Pose::inverse() const {
  Pose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Pose Pose::operator*(const Pose& rhs) const {
  Pose out;
  out.rotation = rotation * rhs.rotation;
  out.translation = rotation * rhs.translation + translation;
  return out;
}

bool Pose::is_rigid(double tol) const {
  const Eigen::Matrix3d err =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && rotation.determinant() > 0.0;
}

Pose interpolate_pose(const Pose& a, const Pose& b, double s) {
  Pose out;
  out.translation = (1.0 - s) * a.translation + s * b.translation;
  const Eigen::AngleAxisd rel(a.rotation.transpose() * b.rotation);
  out.rotation =
      a.rotation * Eigen::AngleAxisd(s * rel.angle(), rel.axis()).toRotationMatrix();
  return out;
}

std::vector<Eigen::Vector3d> transform_points(
    const Pose& pose, std::span<const Eigen::Vector3d> points) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.push_back(pose.apply(p));
  }
  return out;
}

CameraIntrinsics CameraIntrinsics::from_fov(int width, int height, double hfov,
                                            double vfov) {
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.fx = (width / 2.0) / std::tan(hfov / 2.0);
  k.fy = (height / 2.0) / std::tan(vfov / 2.0);
  k.cx = width / 2.0;
  k.cy = height / 2.0;
  return k;
}

CameraIntrinsics CameraIntrinsics::scaled(double sx, double sy) const {
  CameraIntrinsics k = *this;
  k.fx *= sx;
  k.cx *= sx;
  k.fy *= sy;
  k.cy *= sy;
  k.width = static_cast<int>(std::lround(width * sx));
  k.height = static_cast<int>(std::lround(height * sy));
  return k;
}

std::optional<ProjectedPixel> project_point(const CameraIntrinsics& k,
                                            const Eigen::Vector3d& p) {
  if (p.z() <= 1e-6) {
    return std::nullopt;
  }
  ProjectedPixel px;
  px.u = k.fx * p.x() / p.z() + k.cx;
  px.v = k.fy * p.y() / p.z() + k.cy;
  px.depth = p.z();
  return px;
}

Eigen::Vector3d unproject_pixel(const CameraIntrinsics& k, double u, double v,
                                double depth) {
  return Eigen::Vector3d((u - k.cx) / k.fx * depth, (v - k.cy) / k.fy * depth,
                         depth);
}

void GridSpec::validate() const {
  if (!(voxel_size > 0.0)) {
    throw ConfigError("grid voxel_size must be positive");
  }
  for (int axis = 0; axis < 3; ++axis) {
    if (dims[static_cast<std::size_t>(axis)] < 1) {
      throw ConfigError("grid dims must be at least 1 per axis");
    }
  }
}

namespace {

// Clips the parametric segment g0 + t * d, t in [0, 1], against the grid box
// [0, dims] expressed in voxel units. Returns false when there is no overlap.
bool clip_segment(const Eigen::Vector3d& g0, const Eigen::Vector3d& d,
                  const std::array<int, 3>& dims, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  for (int a = 0; a < 3; ++a) {
    const double lo = 0.0;
    const double hi = static_cast<double>(dims[static_cast<std::size_t>(a)]);
    if (d[a] == 0.0) {
      if (g0[a] < lo || g0[a] >= hi) {
        return false;
      }
      continue;
    }
    double ta = (lo - g0[a]) / d[a];
    double tb = (hi - g0[a]) / d[a];
    if (ta > tb) {
      std::swap(ta, tb);
    }
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) {
      return false;
    }
  }
  return true;
}

}  // namespace

RayTraversal traverse_ray(const GridSpec& grid, const Ray& ray) {
  RayTraversal out;
  if (grid.contains(ray.endpoint)) {
    out.hit = grid.cell_of(ray.endpoint);
  }

  // Work in voxel units so cell boundaries sit on integers.
  const Eigen::Vector3d g0 = (ray.origin - grid.origin) / grid.voxel_size;
  const Eigen::Vector3d g1 = (ray.endpoint - grid.origin) / grid.voxel_size;
  const Eigen::Vector3d d = g1 - g0;

  if (d.squaredNorm() < 1e-24) {
    return out;
  }

  double t0 = 0.0;
  double t1 = 1.0;
  if (!clip_segment(g0, d, grid.dims, t0, t1)) {
    return out;
  }

  const Eigen::Vector3d entry = g0 + t0 * d;
  Eigen::Vector3i cell;
  Eigen::Vector3i step;
  Eigen::Vector3d t_next;   // parameter of the next boundary crossing
  Eigen::Vector3d t_delta;  // parameter distance between crossings
  constexpr double kInf = std::numeric_limits<double>::infinity();

  for (int a = 0; a < 3; ++a) {
    int c = static_cast<int>(std::floor(entry[a]));
    // A start exactly on a boundary belongs to the cell the ray moves into.
    if (static_cast<double>(c) == entry[a] && d[a] < 0.0) {
      --c;
    }
    c = std::clamp(c, 0, grid.dims[static_cast<std::size_t>(a)] - 1);
    cell[a] = c;
    if (d[a] > 0.0) {
      step[a] = 1;
      t_next[a] = (static_cast<double>(c + 1) - g0[a]) / d[a];
      t_delta[a] = 1.0 / d[a];
    } else if (d[a] < 0.0) {
      step[a] = -1;
      t_next[a] = (static_cast<double>(c) - g0[a]) / d[a];
      t_delta[a] = -1.0 / d[a];
    } else {
      step[a] = 0;
      t_next[a] = kInf;
      t_delta[a] = kInf;
    }
  }

  const std::size_t max_steps = static_cast<std::size_t>(grid.dims[0]) +
                                static_cast<std::size_t>(grid.dims[1]) +
                                static_cast<std::size_t>(grid.dims[2]) + 3;
  for (std::size_t i = 0; i < max_steps; ++i) {
    if (out.hit && cell == *out.hit) {
      break;
    }
    out.traversed.push_back(cell);

    // Ties step x first, then y, then z.
    int a = 0;
    if (t_next[1] < t_next[0]) {
      a = 1;
    }
    if (t_next[2] < t_next[a]) {
      a = 2;
    }
    if (t_next[a] > t1) {
      break;
    }
    cell[a] += step[a];
    if (cell[a] < 0 || cell[a] >= grid.dims[static_cast<std::size_t>(a)]) {
      break;
    }
    t_next[a] += t_delta[a];
  }
  return out;
}

}  // namespace occ
