// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Mesh extraction from Gaussians: render depth per camera, fuse into a
// truncated signed distance volume, then polygonize the zero level set.
#pragma once

#include "ggs/gaussian.hpp"
#include "ggs/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace ggs {

/// Regular grid of samples at origin + (i, j, k) * voxel_size. Values are
/// positive in observed free space and negative behind surfaces.
struct TsdfVolume {
    Vec3 origin = Vec3::Zero();
    double voxel_size = 1.0;
    std::array<int, 3> dims{0, 0, 0};
    std::vector<double> tsdf;    // in [-1, 1]; 1 where unobserved
    std::vector<double> weight;  // 0 where unobserved

    TsdfVolume() = default;
    TsdfVolume(const Vec3& origin, double voxel_size, const std::array<int, 3>& dims);

    [[nodiscard]] std::size_t size() const { return tsdf.size(); }
    [[nodiscard]] std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i;
    }
    [[nodiscard]] Vec3 position(int i, int j, int k) const {
        return origin + voxel_size * Vec3(i, j, k);
    }
    [[nodiscard]] std::size_t observed_count() const;
    /// Throws InvalidInput when a value leaves its range or arrays disagree with dims.
    void check_invariants() const;
};

struct IntegrationOptions {
    double truncation_voxels = 4.0;
    double weight_cap = 64.0;
    /// Pixels whose accumulated alpha is below this never update the volume.
    double min_alpha = 0.5;
};

struct IntegrationStats {
    std::size_t pixels_used = 0;         // distinct pixels that updated at least one voxel
    std::size_t pixels_low_alpha = 0;    // distinct pixels rejected by the alpha test
    std::size_t low_alpha_updates = 0;   // voxel updates sourced from low-alpha pixels; always 0
    std::size_t voxel_updates = 0;
};

/// Projective TSDF update: each voxel takes the depth of the pixel it
/// projects into. `alpha` is optional (same size as `depth`); when given,
/// pixels under options.min_alpha are skipped. Zero depth means no data.
void integrate(TsdfVolume& volume, const DepthMap& depth, const CameraModel& camera,
               const IntegrationOptions& options = {}, const Image* alpha = nullptr,
               IntegrationStats* stats = nullptr);

/// Zero level set of the volume. Cubes with an unobserved corner are
/// skipped, so unseen regions stay open. Faces wind counterclockwise seen
/// from the positive side. Returns an empty mesh when there is no crossing.
TriangleMesh marching_cubes(const TsdfVolume& volume);

/// Triangles, as triples of cube edges, for each of the 256 inside-corner
/// masks (bit c set when corner c is negative).
const std::vector<std::vector<std::array<int, 3>>>& marching_cubes_table();

struct ExtractOptions {
    /// 0 selects automatically: the larger of the padded bounding-box
    /// diagonal / 256 and `voxel_footprints` times the median depth-pixel
    /// footprint (depth / focal) of the rendered views.
    double voxel_size = 0.0;
    double voxel_footprints = 2.0;
    IntegrationOptions integration;
    Vec3 background = Vec3::Zero();
};

struct ExtractResult {
    TriangleMesh mesh;
    TsdfVolume volume;
    IntegrationStats stats;
    std::vector<std::string> warnings;
};

/// Renders depth and alpha from every camera, integrates, polygonizes.
/// An empty mesh is reported as a warning with volume statistics.
ExtractResult extract(const GaussianCloud& gaussians, const std::vector<CameraModel>& cameras,
                      const ExtractOptions& options = {});

/// Closed chains of edges used by exactly one face.
std::size_t count_boundary_loops(const TriangleMesh& mesh);
/// V - E + F over referenced vertices.
long long euler_characteristic(const TriangleMesh& mesh);

}  // namespace ggs
