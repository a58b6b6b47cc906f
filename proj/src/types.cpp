// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/types.hpp"

#include "ggs/gaussian.hpp"

#include <cmath>
#include <string>

namespace ggs {

void DensePointCloud::validate(double tol) const {
    if (positions.size() != normals.size()) {
        throw InvalidInput("point cloud has " + std::to_string(positions.size()) + " positions but " +
                           std::to_string(normals.size()) + " normals");
    }
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (std::abs(normals[i].norm() - 1.0) > tol) {
            throw InvalidInput("point cloud normal " + std::to_string(i) + " is not unit length");
        }
    }
}

void TriangleMesh::validate() const {
    const int n = static_cast<int>(vertices.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        for (int v : t) {
            if (v < 0 || v >= n) {
                throw InvalidInput("face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                                   " out of range");
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw InvalidInput("face " + std::to_string(f) + " is degenerate");
        }
    }
}

void CameraModel::validate() const {
    if (!(fx > 0.0 && fy > 0.0)) {
        throw InvalidInput("camera focal lengths must be positive");
    }
    if (width <= 0 || height <= 0) {
        throw InvalidInput("camera image size must be positive");
    }
    if (!(cx > 0.0 && cx < width && cy > 0.0 && cy < height)) {
        throw InvalidInput("camera principal point must lie inside the image");
    }
    normalize_quaternion(rotation);
}

Mat3 CameraModel::world_to_camera_rotation() const { return quat_to_rotation_matrix(rotation); }

Vec3 CameraModel::to_camera(const Vec3& world) const {
    return world_to_camera_rotation() * world + translation;
}

Vec3 CameraModel::to_world(const Vec3& cam) const {
    return world_to_camera_rotation().transpose() * (cam - translation);
}

Vec3 CameraModel::center() const { return -(world_to_camera_rotation().transpose() * translation); }

Vec3 CameraModel::view_direction() const { return world_to_camera_rotation().row(2).transpose(); }

Vec2 CameraModel::project_camera(const Vec3& cam) const {
    return {fx * cam.x() / cam.z() + cx, fy * cam.y() / cam.z() + cy};
}

Vec3 CameraModel::unproject(const Vec2& uv, double z) const {
    return {(uv.x() - cx) / fx * z, (uv.y() - cy) / fy * z, z};
}

CameraModel CameraModel::downsampled(int factor) const {
    if (factor < 1) {
        throw InvalidInput("downsample factor must be >= 1");
    }
    CameraModel c = *this;
    const double f = factor;
    c.fx = fx / f;
    c.fy = fy / f;
    c.cx = cx / f;
    c.cy = cy / f;
    c.width = width / factor;
    c.height = height / factor;
    return c;
}

std::size_t DepthMap::valid_count() const {
    std::size_t n = 0;
    for (double d : depth) {
        n += d > 0.0 ? 1 : 0;
    }
    return n;
}

}  // namespace ggs
