// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Analytic test scenes with known geometry: ray-cast textured surfaces,
// ring camera rigs, sampled oriented clouds and reference meshes.
#pragma once

#include "ggs/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ggs::synth {

/// Plane through `center` with normal `axis`; sphere at `center` with
/// `radius`; open tube (no caps) around the world z axis through `center`,
/// spanning center.z +- half_height.
struct Shape {
    enum class Kind { plane, sphere, tube };
    Kind kind = Kind::sphere;
    Vec3 center = Vec3::Zero();
    Vec3 axis = Vec3::UnitZ();
    double radius = 1.0;
    double half_height = 0.7;

    static Shape plane(const Vec3& point, const Vec3& normal);
    static Shape sphere(const Vec3& center, double radius);
    static Shape tube(const Vec3& center, double radius, double half_height);

    /// Unsigned distance to the surface (tube: to the finite open cylinder).
    [[nodiscard]] double distance(const Vec3& p) const;
};

struct Hit {
    double t = 0.0;
    Vec3 point = Vec3::Zero();
    Vec3 normal = Vec3::Zero();  // geometric normal facing the ray origin
};

std::optional<Hit> intersect(const Shape& shape, const Vec3& origin, const Vec3& dir);

/// Smooth multi-octave value noise in RGB, deterministic in (p, seed).
Vec3 texture(const Vec3& p, std::uint64_t seed, double frequency = 4.0);

struct RenderedView {
    Image color;     // RGB
    DepthMap depth;  // camera z of the first hit at pixel centers, 0 on background
};

/// Ray-cast the textured shape with `supersample`^2 rays per pixel.
RenderedView render_view(const Shape& shape, const CameraModel& camera, std::uint64_t seed,
                         const Vec3& background = Vec3::Zero(), int supersample = 2,
                         double texture_frequency = 4.0);

/// Camera at `eye` looking at `target`; world `up` fixes the roll (image y
/// points away from it). Focal length in pixels, principal point centered.
CameraModel look_at(const Vec3& eye, const Vec3& target, const Vec3& up, int width, int height, double focal);

/// `count` cameras on a horizontal circle of `radius` around `target`,
/// alternating between heights +elevation and -elevation when
/// `alternate` is set.
std::vector<CameraModel> ring_cameras(int count, double radius, double elevation, const Vec3& target, int width,
                                      int height, double focal, bool alternate = false);

/// `count` cameras on a sphere of `radius` around `target`, quasi-uniform
/// in direction, so that every side of the target is seen.
std::vector<CameraModel> orbit_cameras(int count, double radius, const Vec3& target, int width, int height,
                                       double focal);

/// Quasi-uniform points on a sphere with outward normals.
DensePointCloud fibonacci_sphere(int count, const Vec3& center, double radius);
/// Regular samples on an open tube with outward normals.
DensePointCloud tube_cloud(int around, int along, const Vec3& center, double radius, double half_height);

/// Flat disk Gaussians on an oriented cloud: the thin axis follows each
/// normal.
GaussianCloud disk_gaussians(const DensePointCloud& cloud, double tangent_scale, double normal_scale,
                             double opacity, const Vec3& color = Vec3::Constant(0.5));

TriangleMesh icosphere(int subdivisions, const Vec3& center, double radius);
TriangleMesh tube_mesh(int around, int along, const Vec3& center, double radius, double half_height);

/// Outer unit sphere plus a fragmented inner shell offset inward by
/// `offset_spacings` times the median spacing of the dense outer cloud.
struct DoubleLayer {
    TriangleMesh mesh;
    DensePointCloud cloud;           // samples of the outer surface only
    std::vector<char> inner_face;    // per mesh face
    double spacing = 0.0;            // median nearest-neighbor distance of the cloud
};
DoubleLayer double_layer_fixture(int cloud_points = 10000, double offset_spacings = 5.0, std::uint64_t seed = 11);

/// A complete multi-view scene with known geometry.
struct Scene {
    std::string name;
    Shape shape;
    std::vector<CameraModel> cameras;
    std::vector<Image> images;
    std::vector<DepthMap> depths;
    DensePointCloud cloud;  // ground-truth oriented samples
    TriangleMesh mesh;      // ground-truth surface
    Vec3 background = Vec3::Zero();
};

struct SceneOptions {
    int views = 20;
    int width = 64;
    int height = 64;
    int supersample = 2;
    int cloud_points = 4000;
    std::uint64_t seed = 7;
};

/// kind: "sphere", "tube" or "plane" (fronto-parallel plane at depth 2
/// seen by a laterally shifted rig). Throws InvalidInput otherwise.
Scene make_scene(const std::string& kind, const SceneOptions& options);

}  // namespace ggs::synth
