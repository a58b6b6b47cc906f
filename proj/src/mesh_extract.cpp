// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/mesh_extract.hpp"

#include "ggs/parallel.hpp"
#include "ggs/render.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ggs {

TsdfVolume::TsdfVolume(const Vec3& o, double voxel, const std::array<int, 3>& d)
    : origin(o), voxel_size(voxel), dims(d) {
    if (!(voxel > 0.0) || d[0] < 2 || d[1] < 2 || d[2] < 2) {
        throw InvalidInput("TSDF volume needs a positive voxel size and at least 2 samples per axis");
    }
    const std::size_t n = static_cast<std::size_t>(d[0]) * d[1] * d[2];
    tsdf.assign(n, 1.0);
    weight.assign(n, 0.0);
}

std::size_t TsdfVolume::observed_count() const {
    return static_cast<std::size_t>(std::count_if(weight.begin(), weight.end(), [](double w) { return w > 0.0; }));
}

void TsdfVolume::check_invariants() const {
    const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    if (tsdf.size() != n || weight.size() != n) throw InvalidInput("TSDF arrays do not match the volume dims");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::abs(tsdf[i]) <= 1.0)) throw InvalidInput("TSDF value out of [-1, 1] at voxel " + std::to_string(i));
        if (!(weight[i] >= 0.0)) throw InvalidInput("negative TSDF weight at voxel " + std::to_string(i));
    }
}

void integrate(TsdfVolume& volume, const DepthMap& depth, const CameraModel& camera, const IntegrationOptions& options,
               const Image* alpha, IntegrationStats* stats) {
    if (depth.width != camera.width || depth.height != camera.height) {
        throw InvalidInput("integrate: depth map and camera resolutions differ");
    }
    if (alpha != nullptr && (alpha->width != depth.width || alpha->height != depth.height)) {
        throw InvalidInput("integrate: alpha and depth resolutions differ");
    }
    const double trunc = options.truncation_voxels * volume.voxel_size;
    auto usable = [&](int x, int y) {
        return depth.at(x, y) > 0.0 && (alpha == nullptr || alpha->at(x, y) >= options.min_alpha);
    };

    const int nz = volume.dims[2];
    std::vector<std::size_t> updates(static_cast<std::size_t>(nz), 0), leaks(static_cast<std::size_t>(nz), 0);
    const Mat3 rot = camera.world_to_camera_rotation();
    parallel_for(static_cast<std::size_t>(nz), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        for (int j = 0; j < volume.dims[1]; ++j)
            for (int i = 0; i < volume.dims[0]; ++i) {
                const Vec3 pc = rot * volume.position(i, j, k) + camera.translation;
                if (pc.z() <= 0.0) continue;
                const Vec2 uv = camera.project_camera(pc);
                const int x = static_cast<int>(std::floor(uv.x()));
                const int y = static_cast<int>(std::floor(uv.y()));
                if (x < 0 || y < 0 || x >= depth.width || y >= depth.height || !usable(x, y)) continue;
                const double sdf = depth.at(x, y) - pc.z();
                if (sdf < -trunc) continue;
                const std::size_t v = volume.index(i, j, k);
                const double t = std::min(1.0, sdf / trunc);
                const double w = volume.weight[v];
                volume.tsdf[v] = (volume.tsdf[v] * w + t) / (w + 1.0);
                volume.weight[v] = std::min(w + 1.0, options.weight_cap);
                ++updates[kk];
                if (alpha != nullptr && alpha->at(x, y) < options.min_alpha) ++leaks[kk];
            }
    });

    if (stats != nullptr) {
        for (int y = 0; y < depth.height; ++y)
            for (int x = 0; x < depth.width; ++x) {
                if (depth.at(x, y) <= 0.0) continue;
                if (usable(x, y)) {
                    ++stats->pixels_used;
                } else {
                    ++stats->pixels_low_alpha;
                }
            }
        for (int k = 0; k < nz; ++k) {
            stats->voxel_updates += updates[static_cast<std::size_t>(k)];
            stats->low_alpha_updates += leaks[static_cast<std::size_t>(k)];
        }
    }
}

namespace {

// Corner c sits at offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
constexpr std::array<std::array<int, 2>, 12> kEdges{{
    {0, 1}, {2, 3}, {4, 5}, {6, 7},  // along x
    {0, 2}, {1, 3}, {4, 6}, {5, 7},  // along y
    {0, 4}, {1, 5}, {2, 6}, {3, 7},  // along z
}};

// Faces with corners counterclockwise around the outward normal.
constexpr std::array<std::array<int, 4>, 6> kFaces{{
    {0, 4, 6, 2}, {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 2, 3, 1}, {4, 5, 7, 6},
}};

int edge_between(int a, int b) {
    for (int e = 0; e < 12; ++e) {
        if ((kEdges[static_cast<std::size_t>(e)][0] == a && kEdges[static_cast<std::size_t>(e)][1] == b) ||
            (kEdges[static_cast<std::size_t>(e)][0] == b && kEdges[static_cast<std::size_t>(e)][1] == a)) {
            return e;
        }
    }
    return -1;
}

// Every face is cut so that inside corners stay separated, the same rule on
// both sides of a shared face, so neighboring cubes agree and the surface
// has no cracks. The face cuts chain into closed loops around the cube.
std::vector<std::vector<std::array<int, 3>>> build_table() {
    std::vector<std::vector<std::array<int, 3>>> table(256);
    for (int config = 0; config < 256; ++config) {
        auto inside = [&](int c) { return ((config >> c) & 1) != 0; };
        std::array<int, 12> next;
        next.fill(-1);
        for (const auto& f : kFaces) {
            for (int m = 0; m < 4; ++m) {
                const int prev = f[static_cast<std::size_t>((m + 3) % 4)];
                if (!inside(f[static_cast<std::size_t>(m)]) || inside(prev)) continue;
                // A run of inside corners starts at m; find where it ends.
                int n = m;
                while (inside(f[static_cast<std::size_t>((n + 1) % 4)])) n = (n + 1) % 4;
                const int entering = edge_between(prev, f[static_cast<std::size_t>(m)]);
                const int leaving = edge_between(f[static_cast<std::size_t>(n)], f[static_cast<std::size_t>((n + 1) % 4)]);
                next[static_cast<std::size_t>(leaving)] = entering;
            }
        }
        std::array<bool, 12> used{};
        for (int start = 0; start < 12; ++start) {
            if (next[static_cast<std::size_t>(start)] < 0 || used[static_cast<std::size_t>(start)]) continue;
            std::vector<int> loop;
            for (int e = start; !used[static_cast<std::size_t>(e)]; e = next[static_cast<std::size_t>(e)]) {
                used[static_cast<std::size_t>(e)] = true;
                loop.push_back(e);
            }
            // Reverse fan so that faces wind counterclockwise from outside.
            for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
                table[static_cast<std::size_t>(config)].push_back({loop[0], loop[i + 1], loop[i]});
            }
        }
    }
    return table;
}

}  // namespace

const std::vector<std::vector<std::array<int, 3>>>& marching_cubes_table() {
    static const auto table = build_table();
    return table;
}

TriangleMesh marching_cubes(const TsdfVolume& volume) {
    const auto& table = marching_cubes_table();
    const auto [nx, ny, nz] = volume.dims;
    if (nx < 2 || ny < 2 || nz < 2) return {};

    // Edge key: lower corner voxel index * 3 + axis.
    auto edge_key = [&](int i, int j, int k, int e) -> std::uint64_t {
        const int c = kEdges[static_cast<std::size_t>(e)][0];
        const std::uint64_t base = volume.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
        return base * 3 + static_cast<std::uint64_t>(e / 4);
    };

    const std::size_t slabs = static_cast<std::size_t>(nz - 1);
    std::vector<std::vector<std::array<std::uint64_t, 3>>> per_slab(slabs);
    parallel_for(slabs, [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        auto& out = per_slab[kk];
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                int config = 0;
                bool observed = true;
                for (int c = 0; c < 8; ++c) {
                    const std::size_t v = volume.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                    if (volume.weight[v] <= 0.0) {
                        observed = false;
                        break;
                    }
                    if (volume.tsdf[v] < 0.0) config |= 1 << c;
                }
                if (!observed) continue;
                for (const auto& tri : table[static_cast<std::size_t>(config)]) {
                    out.push_back({edge_key(i, j, k, tri[0]), edge_key(i, j, k, tri[1]), edge_key(i, j, k, tri[2])});
                }
            }
    });

    TriangleMesh mesh;
    std::unordered_map<std::uint64_t, int> vertex_of;
    const std::array<std::size_t, 3> stride{1, static_cast<std::size_t>(nx), static_cast<std::size_t>(nx) * ny};
    auto vertex = [&](std::uint64_t key) {
        auto [it, inserted] = vertex_of.try_emplace(key, static_cast<int>(mesh.vertices.size()));
        if (inserted) {
            const std::size_t a = key / 3;
            const int axis = static_cast<int>(key % 3);
            const std::size_t b = a + stride[static_cast<std::size_t>(axis)];
            const double va = volume.tsdf[a];
            const double vb = volume.tsdf[b];
            // Kept off the corners so that fans never collapse to zero area.
            const double t = std::clamp(va / (va - vb), 1e-3, 1.0 - 1e-3);
            const int i = static_cast<int>(a % static_cast<std::size_t>(nx));
            const int j = static_cast<int>((a / static_cast<std::size_t>(nx)) % static_cast<std::size_t>(ny));
            const int k = static_cast<int>(a / (static_cast<std::size_t>(nx) * ny));
            Vec3 p = volume.position(i, j, k);
            p[axis] += t * volume.voxel_size;
            mesh.vertices.push_back(p);
        }
        return it->second;
    };
    for (const auto& slab : per_slab)
        for (const auto& tri : slab) mesh.faces.push_back({vertex(tri[0]), vertex(tri[1]), vertex(tri[2])});
    mesh.validate();
    return mesh;
}

ExtractResult extract(const GaussianCloud& gaussians, const std::vector<CameraModel>& cameras,
                      const ExtractOptions& options) {
    if (gaussians.size() == 0) throw InvalidInput("extract: no Gaussians");
    if (cameras.empty()) throw InvalidInput("extract: no cameras");
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& g : gaussians.primitives) {
        lo = lo.cwiseMin(g.position);
        hi = hi.cwiseMax(g.position);
    }
    const double margin = 0.05 * std::max((hi - lo).norm(), 1e-6);
    lo -= Vec3::Constant(margin);
    hi += Vec3::Constant(margin);
    RenderOptions ro;
    ro.background = options.background;
    std::vector<DepthMap> depths;
    std::vector<Image> alphas;
    std::vector<double> footprints;
    for (const auto& cam : cameras) {
        const RenderResult r = render(gaussians, cam, ro);
        DepthMap dm(0, cam.width, cam.height);
        for (int y = 0; y < cam.height; ++y)
            for (int x = 0; x < cam.width; ++x) {
                const double z = r.frame.depth.at(x, y);
                dm.at(x, y) = z;
                if (z > 0.0 && r.frame.alpha.at(x, y) >= options.integration.min_alpha) {
                    footprints.push_back(z / std::min(cam.fx, cam.fy));
                }
            }
        depths.push_back(std::move(dm));
        alphas.push_back(r.frame.alpha);
    }

    double voxel = options.voxel_size;
    if (!(voxel > 0.0)) {
        // Never finer than a depth pixel: thinner voxels carve holes into two-sided sheets.
        voxel = (hi - lo).norm() / 256.0;
        if (!footprints.empty()) {
            auto mid = footprints.begin() + static_cast<std::ptrdiff_t>(footprints.size() / 2);
            std::nth_element(footprints.begin(), mid, footprints.end());
            voxel = std::max(voxel, options.voxel_footprints * *mid);
        }
    }
    const double pad = (options.integration.truncation_voxels + 1.0) * voxel;
    lo -= Vec3::Constant(pad);
    hi += Vec3::Constant(pad);
    std::array<int, 3> dims{};
    for (int a = 0; a < 3; ++a) dims[static_cast<std::size_t>(a)] = static_cast<int>(std::ceil((hi[a] - lo[a]) / voxel)) + 1;

    ExtractResult result;
    result.volume = TsdfVolume(lo, voxel, dims);
    for (std::size_t i = 0; i < cameras.size(); ++i) {
        integrate(result.volume, depths[i], cameras[i], options.integration, &alphas[i], &result.stats);
    }
    result.mesh = marching_cubes(result.volume);
    if (result.mesh.empty()) {
        const auto [mn, mx] = std::minmax_element(result.volume.tsdf.begin(), result.volume.tsdf.end());
        std::ostringstream msg;
        msg << "mesh extraction produced no faces: " << result.volume.observed_count() << " of "
            << result.volume.size() << " voxels observed, tsdf range [" << *mn << ", " << *mx << "], "
            << result.stats.pixels_used << " usable pixels, " << result.stats.pixels_low_alpha
            << " rejected for low alpha";
        result.warnings.push_back(msg.str());
    }
    return result;
}

namespace {

std::uint64_t undirected(int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

}  // namespace

std::size_t count_boundary_loops(const TriangleMesh& mesh) {
    std::map<std::uint64_t, int> uses;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) ++uses[undirected(f[static_cast<std::size_t>(e)], f[static_cast<std::size_t>((e + 1) % 3)])];

    // Union-find over vertices joined by boundary edges.
    std::unordered_map<int, int> parent;
    std::function<int(int)> find = [&](int v) {
        int r = v;
        while (parent[r] != r) r = parent[r];
        while (parent[v] != r) {
            const int n = parent[v];
            parent[v] = r;
            v = n;
        }
        return r;
    };
    for (const auto& [key, count] : uses) {
        if (count != 1) continue;
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        parent.try_emplace(a, a);
        parent.try_emplace(b, b);
        const int ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::size_t loops = 0;
    for (const auto& [v, p] : parent) {
        if (find(v) == v) ++loops;
    }
    return loops;
}

long long euler_characteristic(const TriangleMesh& mesh) {
    std::vector<char> referenced(mesh.vertices.size(), 0);
    std::map<std::uint64_t, int> edges;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) {
            referenced[static_cast<std::size_t>(f[static_cast<std::size_t>(e)])] = 1;
            ++edges[undirected(f[static_cast<std::size_t>(e)], f[static_cast<std::size_t>((e + 1) % 3)])];
        }
    const auto v = static_cast<long long>(std::count(referenced.begin(), referenced.end(), 1));
    return v - static_cast<long long>(edges.size()) + static_cast<long long>(mesh.faces.size());
}

}  // namespace ggs
