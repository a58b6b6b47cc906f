// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Shared value types: Gaussian primitives, oriented point clouds, meshes,
// pinhole cameras and raster images.
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggs {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed a value outside an operation's domain.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A configuration is inconsistent or incomplete (maps to CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

/// One anisotropic Gaussian splat.
///
/// Scales are stored as logs and opacity as a logit, so any real-valued
/// parameter vector describes a valid primitive. The rotation is a
/// scalar-first quaternion (w, x, y, z) that is renormalized at use.
struct GaussianPrimitive {
    Vec3 position = Vec3::Zero();
    Vec4 rotation{1.0, 0.0, 0.0, 0.0};
    Vec3 log_scale = Vec3::Zero();
    double opacity_logit = 0.0;
    Vec3 color = Vec3::Constant(0.5);

    [[nodiscard]] Vec3 scales() const { return log_scale.array().exp(); }
    [[nodiscard]] double opacity() const;

    bool operator==(const GaussianPrimitive&) const = default;
};

struct GaussianCloud {
    std::vector<GaussianPrimitive> primitives;

    [[nodiscard]] std::size_t size() const { return primitives.size(); }
    [[nodiscard]] bool empty() const { return primitives.empty(); }
    GaussianPrimitive& operator[](std::size_t i) { return primitives[i]; }
    const GaussianPrimitive& operator[](std::size_t i) const { return primitives[i]; }

    bool operator==(const GaussianCloud&) const = default;
};

/// Oriented point set. Positions and normals only; there is deliberately no
/// color channel.
struct DensePointCloud {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;

    [[nodiscard]] std::size_t size() const { return positions.size(); }
    [[nodiscard]] bool empty() const { return positions.empty(); }

    /// Throws InvalidInput when sizes differ or a normal is not unit length.
    void validate(double tol = 1e-6) const;
};

using Face = std::array<int, 3>;

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;

    [[nodiscard]] bool empty() const { return faces.empty(); }

    /// Throws InvalidInput on out-of-range indices or degenerate faces.
    void validate() const;
};

/// Pinhole camera with a rigid world-to-camera transform.
/// Camera frame: x right, y down, z forward. Pixel (i, j) has its center at
/// (i + 0.5, j + 0.5) in continuous image coordinates.
struct CameraModel {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.5;
    double cy = 0.5;
    Vec4 rotation{1.0, 0.0, 0.0, 0.0};
    Vec3 translation = Vec3::Zero();
    int width = 1;
    int height = 1;

    void validate() const;

    [[nodiscard]] Mat3 world_to_camera_rotation() const;
    [[nodiscard]] Vec3 to_camera(const Vec3& world) const;
    [[nodiscard]] Vec3 to_world(const Vec3& cam) const;
    [[nodiscard]] Vec3 center() const;
    /// Unit optical axis in world coordinates.
    [[nodiscard]] Vec3 view_direction() const;
    /// Continuous pixel coordinates of a camera-space point (z must be > 0).
    [[nodiscard]] Vec2 project_camera(const Vec3& cam) const;
    /// Camera-space point at depth z along the ray through continuous pixel uv.
    [[nodiscard]] Vec3 unproject(const Vec2& uv, double z) const;
    /// Intrinsics rescaled for an image downsampled by an integer factor.
    [[nodiscard]] CameraModel downsampled(int factor) const;

    bool operator==(const CameraModel&) const = default;
};

/// Row-major interleaved image of doubles, nominally in [0, 1].
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    [[nodiscard]] std::size_t index(int x, int y, int c = 0) const {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    double& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
    [[nodiscard]] double at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
    [[nodiscard]] bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
    [[nodiscard]] bool empty() const { return data.empty(); }

    bool operator==(const Image&) const = default;
};

/// Per-view depth, world units along the camera z axis; 0 marks invalid.
struct DepthMap {
    int view_id = 0;
    int width = 0;
    int height = 0;
    std::vector<double> depth;

    DepthMap() = default;
    DepthMap(int id, int w, int h) : view_id(id), width(w), height(h),
        depth(static_cast<std::size_t>(w) * h, 0.0) {}

    double& at(int x, int y) { return depth[static_cast<std::size_t>(y) * width + x]; }
    [[nodiscard]] double at(int x, int y) const { return depth[static_cast<std::size_t>(y) * width + x]; }
    [[nodiscard]] std::size_t valid_count() const;
};

}  // namespace ggs
