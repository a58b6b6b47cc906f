// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/synthetic.hpp"

#include "ggs/gaussian.hpp"
#include "ggs/parallel.hpp"
#include "ggs/spatial_index.hpp"


#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace ggs::synth {
namespace {

constexpr double kEps = 1e-9;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double lattice(long long ix, long long iy, long long iz, std::uint64_t seed) {
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ static_cast<std::uint64_t>(ix));
    h = splitmix(h ^ static_cast<std::uint64_t>(iy));
    h = splitmix(h ^ static_cast<std::uint64_t>(iz));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * t * (t * (6.0 * t - 15.0) + 10.0); }

double value_noise(const Vec3& p, std::uint64_t seed) {
    const Vec3 f = p.array().floor();
    const auto ix = static_cast<long long>(f.x());
    const auto iy = static_cast<long long>(f.y());
    const auto iz = static_cast<long long>(f.z());
    const double tx = smooth(p.x() - f.x());
    const double ty = smooth(p.y() - f.y());
    const double tz = smooth(p.z() - f.z());
    double v[2][2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) v[a][b][c] = lattice(ix + a, iy + b, iz + c, seed);
    auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
    const double x00 = lerp(v[0][0][0], v[1][0][0], tx);
    const double x10 = lerp(v[0][1][0], v[1][1][0], tx);
    const double x01 = lerp(v[0][0][1], v[1][0][1], tx);
    const double x11 = lerp(v[0][1][1], v[1][1][1], tx);
    return lerp(lerp(x00, x10, ty), lerp(x01, x11, ty), tz);
}

// Orthonormal frame whose third column is n.
Mat3 frame_from_normal(const Vec3& n) {
    const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = (helper - n * n.dot(helper)).normalized();
    const Vec3 t2 = n.cross(t1);
    Mat3 r;
    r.col(0) = t1;
    r.col(1) = t2;
    r.col(2) = n;
    return r;
}

}  // namespace

Shape Shape::plane(const Vec3& point, const Vec3& normal) {
    Shape s;
    s.kind = Kind::plane;
    s.center = point;
    s.axis = normal.normalized();
    return s;
}

Shape Shape::sphere(const Vec3& center, double radius) {
    Shape s;
    s.kind = Kind::sphere;
    s.center = center;
    s.radius = radius;
    return s;
}

Shape Shape::tube(const Vec3& center, double radius, double half_height) {
    Shape s;
    s.kind = Kind::tube;
    s.center = center;
    s.radius = radius;
    s.half_height = half_height;
    return s;
}

double Shape::distance(const Vec3& p) const {
    const Vec3 d = p - center;
    switch (kind) {
        case Kind::plane: return std::abs(d.dot(axis));
        case Kind::sphere: return std::abs(d.norm() - radius);
        case Kind::tube: {
            const double radial = std::hypot(d.x(), d.y()) - radius;
            const double over = std::abs(d.z()) - half_height;
            return over <= 0.0 ? std::abs(radial) : std::hypot(radial, over);
        }
    }
    return 0.0;
}

std::optional<Hit> intersect(const Shape& shape, const Vec3& origin, const Vec3& dir) {
    Hit hit;
    const Vec3 o = origin - shape.center;
    auto finish = [&](double t, const Vec3& n) {
        hit.t = t;
        hit.point = origin + t * dir;
        hit.normal = n.dot(dir) > 0.0 ? Vec3(-n) : n;
        return std::optional<Hit>(hit);
    };
    switch (shape.kind) {
        case Shape::Kind::plane: {
            const double denom = dir.dot(shape.axis);
            if (std::abs(denom) < 1e-12) return std::nullopt;
            const double t = -o.dot(shape.axis) / denom;
            if (t <= kEps) return std::nullopt;
            return finish(t, shape.axis);
        }
        case Shape::Kind::sphere: {
            const double b = o.dot(dir);
            const double c = o.squaredNorm() - shape.radius * shape.radius;
            const double a = dir.squaredNorm();
            const double disc = b * b - a * c;
            if (disc < 0.0) return std::nullopt;
            const double sq = std::sqrt(disc);
            for (double t : {(-b - sq) / a, (-b + sq) / a}) {
                if (t > kEps) return finish(t, (o + t * dir).normalized());
            }
            return std::nullopt;
        }
        case Shape::Kind::tube: {
            const double a = dir.x() * dir.x() + dir.y() * dir.y();
            if (a < 1e-15) return std::nullopt;
            const double b = o.x() * dir.x() + o.y() * dir.y();
            const double c = o.x() * o.x() + o.y() * o.y() - shape.radius * shape.radius;
            const double disc = b * b - a * c;
            if (disc < 0.0) return std::nullopt;
            const double sq = std::sqrt(disc);
            for (double t : {(-b - sq) / a, (-b + sq) / a}) {
                if (t <= kEps) continue;
                const Vec3 p = o + t * dir;
                if (std::abs(p.z()) > shape.half_height) continue;
                return finish(t, Vec3(p.x(), p.y(), 0.0).normalized());
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

Vec3 texture(const Vec3& p, std::uint64_t seed, double frequency) {
    Vec3 rgb;
    for (int c = 0; c < 3; ++c) {
        const std::uint64_t s = seed * 3 + static_cast<std::uint64_t>(c);
        const double n = 0.6 * value_noise(p * frequency, s) + 0.4 * value_noise(p * (2.3 * frequency), s + 101);
        rgb[c] = std::clamp(0.5 + 1.8 * (n - 0.5), 0.0, 1.0);
    }
    return rgb;
}

RenderedView render_view(const Shape& shape, const CameraModel& camera, std::uint64_t seed, const Vec3& background,
                         int supersample, double texture_frequency) {
    camera.validate();
    const int ss = std::max(1, supersample);
    RenderedView out;
    out.color = Image(camera.width, camera.height, 3);
    out.depth = DepthMap(0, camera.width, camera.height);
    const Mat3 rt = camera.world_to_camera_rotation().transpose();
    const Vec3 origin = camera.center();
    parallel_for(static_cast<std::size_t>(camera.height), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < camera.width; ++x) {
            Vec3 acc = Vec3::Zero();
            for (int sy = 0; sy < ss; ++sy)
                for (int sx = 0; sx < ss; ++sx) {
                    const Vec2 uv{x + (sx + 0.5) / ss, y + (sy + 0.5) / ss};
                    const Vec3 dir = (rt * camera.unproject(uv, 1.0)).normalized();
                    const auto hit = intersect(shape, origin, dir);
                    acc += hit ? texture(hit->point, seed, texture_frequency) : background;
                }
            acc /= static_cast<double>(ss * ss);
            for (int c = 0; c < 3; ++c) out.color.at(x, y, c) = acc[c];
            const Vec3 dir = rt * camera.unproject({x + 0.5, y + 0.5}, 1.0);
            if (const auto hit = intersect(shape, origin, dir.normalized())) {
                out.depth.at(x, y) = camera.to_camera(hit->point).z();
            }
        }
    });
    return out;
}

CameraModel look_at(const Vec3& eye, const Vec3& target, const Vec3& up, int width, int height, double focal) {
    const Vec3 f = (target - eye).normalized();
    Vec3 r = f.cross(up);
    if (r.norm() < 1e-9) r = f.cross(Vec3::UnitY().cross(f).norm() > 1e-9 ? Vec3::UnitY() : Vec3::UnitX());
    r.normalize();
    const Vec3 d = f.cross(r);
    Mat3 rot;
    rot.row(0) = r;
    rot.row(1) = d;
    rot.row(2) = f;
    CameraModel cam;
    cam.fx = cam.fy = focal;
    cam.width = width;
    cam.height = height;
    cam.cx = width / 2.0;
    cam.cy = height / 2.0;
    cam.rotation = rotation_matrix_to_quat(rot);
    cam.translation = -(quat_to_rotation_matrix(cam.rotation) * eye);
    return cam;
}

std::vector<CameraModel> ring_cameras(int count, double radius, double elevation, const Vec3& target, int width,
                                      int height, double focal, bool alternate) {
    std::vector<CameraModel> cams;
    for (int i = 0; i < count; ++i) {
        const double a = 2.0 * std::numbers::pi * i / count;
        const double z = alternate && (i % 2 == 1) ? -elevation : elevation;
        const Vec3 eye = target + Vec3{radius * std::cos(a), radius * std::sin(a), z};
        cams.push_back(look_at(eye, target, Vec3::UnitZ(), width, height, focal));
    }
    return cams;
}

DensePointCloud fibonacci_sphere(int count, const Vec3& center, double radius) {
    DensePointCloud cloud;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        const Vec3 n{r * std::cos(phi), r * std::sin(phi), z};
        cloud.positions.push_back(center + radius * n);
        cloud.normals.push_back(n.normalized());
    }
    return cloud;
}

std::vector<CameraModel> orbit_cameras(int count, double radius, const Vec3& target, int width, int height,
                                       double focal) {
    const DensePointCloud dirs = fibonacci_sphere(count, Vec3::Zero(), 1.0);
    std::vector<CameraModel> cams;
    for (const Vec3& d : dirs.positions) {
        const Vec3 up = std::abs(d.z()) > 0.9 ? Vec3::UnitX() : Vec3::UnitZ();
        cams.push_back(look_at(target + radius * d, target, up, width, height, focal));
    }
    return cams;
}

DensePointCloud tube_cloud(int around, int along, const Vec3& center, double radius, double half_height) {
    DensePointCloud cloud;
    for (int j = 0; j < along; ++j) {
        const double z = along == 1 ? 0.0 : -half_height + 2.0 * half_height * j / (along - 1);
        for (int i = 0; i < around; ++i) {
            // Stagger alternate rings so the sampling is closer to isotropic.
            const double a = 2.0 * std::numbers::pi * (i + 0.5 * (j % 2)) / around;
            const Vec3 n{std::cos(a), std::sin(a), 0.0};
            cloud.positions.push_back(center + Vec3{radius * n.x(), radius * n.y(), z});
            cloud.normals.push_back(n);
        }
    }
    return cloud;
}

GaussianCloud disk_gaussians(const DensePointCloud& cloud, double tangent_scale, double normal_scale, double opacity,
                             const Vec3& color) {
    GaussianCloud out;
    out.primitives.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        GaussianPrimitive g;
        g.position = cloud.positions[i];
        g.rotation = rotation_matrix_to_quat(frame_from_normal(cloud.normals[i].normalized()));
        g.log_scale = {std::log(tangent_scale), std::log(tangent_scale), std::log(normal_scale)};
        g.opacity_logit = logit(opacity);
        g.color = color;
        out.primitives.push_back(g);
    }
    return out;
}

TriangleMesh icosphere(int subdivisions, const Vec3& center, double radius) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p.normalize();
    std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                           {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                           {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
            const int idx = static_cast<int>(v.size()) - 1;
            mid.emplace(key, idx);
            return idx;
        };
        std::vector<Face> next;
        next.reserve(f.size() * 4);
        for (const auto& tri : f) {
            const int a = midpoint(tri[0], tri[1]);
            const int b = midpoint(tri[1], tri[2]);
            const int c = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        f = std::move(next);
    }
    TriangleMesh mesh;
    for (const auto& p : v) mesh.vertices.push_back(center + radius * p);
    mesh.faces = std::move(f);
    return mesh;
}

TriangleMesh tube_mesh(int around, int along, const Vec3& center, double radius, double half_height) {
    TriangleMesh mesh;
    for (int j = 0; j < along; ++j) {
        const double z = -half_height + 2.0 * half_height * j / (along - 1);
        for (int i = 0; i < around; ++i) {
            const double a = 2.0 * std::numbers::pi * i / around;
            mesh.vertices.push_back(center + Vec3{radius * std::cos(a), radius * std::sin(a), z});
        }
    }
    for (int j = 0; j + 1 < along; ++j)
        for (int i = 0; i < around; ++i) {
            const int a = j * around + i;
            const int b = j * around + (i + 1) % around;
            const int c = a + around;
            const int d = b + around;
            // Counter-clockwise seen from outside.
            mesh.faces.push_back({a, b, d});
            mesh.faces.push_back({a, d, c});
        }
    return mesh;
}

Scene make_scene(const std::string& kind, const SceneOptions& opt) {
    if (opt.views < 1 || opt.width < 2 || opt.height < 2)
        throw InvalidInput("scene needs at least one view of at least 2x2 pixels");
    Scene s;
    s.name = kind;
    const double focal = 1.2 * opt.width;
    if (kind == "sphere") {
        s.shape = Shape::sphere(Vec3::Zero(), 1.0);
        s.cameras = ring_cameras(opt.views, 4.0, 1.2, Vec3::Zero(), opt.width, opt.height, focal);
        s.cloud = fibonacci_sphere(opt.cloud_points, Vec3::Zero(), 1.0);
        s.mesh = icosphere(4, Vec3::Zero(), 1.0);
    } else if (kind == "tube") {
        const double r = 0.6, h = 0.6;
        s.shape = Shape::tube(Vec3::Zero(), r, h);
        s.cameras = ring_cameras(opt.views, 3.5, 1.6, Vec3::Zero(), opt.width, opt.height, focal, true);
        const double circumference = 2.0 * std::numbers::pi * r;
        const int around = std::max(8, static_cast<int>(std::lround(std::sqrt(opt.cloud_points * circumference / (2 * h)))));
        const int along = std::max(2, opt.cloud_points / around);
        s.cloud = tube_cloud(around, along, Vec3::Zero(), r, h);
        s.mesh = tube_mesh(64, 33, Vec3::Zero(), r, h);
    } else if (kind == "plane") {
        const double depth = 2.0;
        s.shape = Shape::plane({0, 0, depth}, {0, 0, -1});
        // Reference at the origin, the rest on a small lateral ring.
        for (int i = 0; i < opt.views; ++i) {
            Vec3 eye = Vec3::Zero();
            if (i > 0) {
                const double a = 2.0 * std::numbers::pi * (i - 1) / std::max(1, opt.views - 1);
                eye = {0.25 * std::cos(a), 0.25 * std::sin(a), 0.0};
            }
            CameraModel cam = look_at(eye, eye + Vec3::UnitZ(), -Vec3::UnitY(), opt.width, opt.height, focal);
            s.cameras.push_back(cam);
        }
        const int side = std::max(2, static_cast<int>(std::lround(std::sqrt(opt.cloud_points))));
        for (int j = 0; j < side; ++j)
            for (int i = 0; i < side; ++i) {
                s.cloud.positions.push_back({-1.5 + 3.0 * i / (side - 1), -1.5 + 3.0 * j / (side - 1), depth});
                s.cloud.normals.push_back({0, 0, -1});
            }
        s.mesh.vertices = {{-1.5, -1.5, depth}, {1.5, -1.5, depth}, {1.5, 1.5, depth}, {-1.5, 1.5, depth}};
        s.mesh.faces = {{0, 2, 1}, {0, 3, 2}};
    } else {
        throw InvalidInput("unknown scene '" + kind + "' (expected sphere, tube or plane)");
    }
    for (const auto& cam : s.cameras) {
        auto view = render_view(s.shape, cam, opt.seed, s.background, opt.supersample);
        view.depth.view_id = static_cast<int>(s.images.size());
        s.images.push_back(std::move(view.color));
        s.depths.push_back(std::move(view.depth));
    }
    return s;
}

DoubleLayer double_layer_fixture(int cloud_points, double offset_spacings, std::uint64_t seed) {
    DoubleLayer out;
    out.cloud = fibonacci_sphere(cloud_points, Vec3::Zero(), 1.0);
    const SpatialIndex index(out.cloud.positions);
    std::vector<double> nn(out.cloud.size());
    for (std::size_t i = 0; i < nn.size(); ++i) {
        nn[i] = index.knn(out.cloud.positions[i], 1, static_cast<int>(i)).front().distance();
    }
    std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2), nn.end());
    out.spacing = nn[nn.size() / 2];

    out.mesh = icosphere(4, Vec3::Zero(), 1.0);
    out.inner_face.assign(out.mesh.faces.size(), 0);
    // Inner shell cut into patches by low-frequency noise.
    const TriangleMesh inner = icosphere(4, Vec3::Zero(), 1.0 - offset_spacings * out.spacing);
    std::vector<int> remap(inner.vertices.size(), -1);
    for (const auto& f : inner.faces) {
        const Vec3 c = (inner.vertices[static_cast<std::size_t>(f[0])] + inner.vertices[static_cast<std::size_t>(f[1])] +
                        inner.vertices[static_cast<std::size_t>(f[2])]) / 3.0;
        if (value_noise(c * 3.0, seed) < 0.55) continue;
        Face nf{};
        for (int k = 0; k < 3; ++k) {
            int& r = remap[static_cast<std::size_t>(f[static_cast<std::size_t>(k)])];
            if (r < 0) {
                r = static_cast<int>(out.mesh.vertices.size());
                out.mesh.vertices.push_back(inner.vertices[static_cast<std::size_t>(f[static_cast<std::size_t>(k)])]);
            }
            nf[static_cast<std::size_t>(k)] = r;
        }
        out.mesh.faces.push_back(nf);
        out.inner_face.push_back(1);
    }
    return out;
}

}  // namespace ggs::synth
