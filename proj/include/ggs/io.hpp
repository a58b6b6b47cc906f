// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// File formats: PLY (Gaussian checkpoints, point clouds, meshes), OBJ,
// PNG, PFM and the plain-text camera list.
#pragma once

#include "ggs/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ggs::io {

namespace fs = std::filesystem;

/// Parsed PLY contents: scalar properties as double columns, list
/// properties as integer lists. Supports ascii and binary_little_endian.
struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> property_order;
    std::map<std::string, std::vector<double>> scalars;
    std::map<std::string, std::vector<std::vector<long long>>> lists;

    [[nodiscard]] bool has(const std::string& prop) const { return scalars.count(prop) != 0; }
    /// Throws IoError when the property is absent.
    [[nodiscard]] const std::vector<double>& column(const std::string& prop) const;
};

struct PlyData {
    std::vector<PlyElement> elements;
    [[nodiscard]] const PlyElement* find(const std::string& name) const;
};

PlyData read_ply(const fs::path& path);

/// Binary little-endian checkpoint with one vertex per primitive and the
/// properties x y z f_dc_0 f_dc_1 f_dc_2 opacity scale_0..2 rot_0..3
/// (log-scales, opacity logit, quaternion w first). f_dc stores the RGB
/// color directly.
void write_gaussians(const fs::path& path, const GaussianCloud& cloud);
GaussianCloud read_gaussians(const fs::path& path);

/// Binary little-endian PLY with x y z nx ny nz.
void write_point_cloud(const fs::path& path, const DensePointCloud& cloud);
/// Normals are renormalized on load; a point cloud without normals is an
/// IoError.
DensePointCloud read_point_cloud(const fs::path& path);
/// Positions only (normals, if any, are ignored).
std::vector<Vec3> read_points(const fs::path& path);

void write_mesh_ply(const fs::path& path, const TriangleMesh& mesh);
void write_obj(const fs::path& path, const TriangleMesh& mesh);
TriangleMesh read_obj(const fs::path& path);
/// Dispatches on the extension (.obj or .ply).
void write_mesh(const fs::path& path, const TriangleMesh& mesh);
TriangleMesh read_mesh(const fs::path& path);

/// 8-bit PNG (gray, gray+alpha, RGB or RGBA; alpha dropped) as an image of
/// doubles in [0, 1].
Image read_png(const fs::path& path);
/// Writes 1 or 3 channels; values clamped to [0, 1] and rounded.
void write_png(const fs::path& path, const Image& image);

/// Portable float map: little-endian, bottom-up scanlines.
void write_pfm(const fs::path& path, const Image& image);
Image read_pfm(const fs::path& path);
void write_depth_pfm(const fs::path& path, const DepthMap& depth);

/// One camera per line: id fx fy cx cy qw qx qy qz tx ty tz width height.
/// Blank lines and lines starting with '#' are skipped.
struct CameraEntry {
    int id = 0;
    CameraModel camera;
};
std::vector<CameraEntry> read_cameras(const fs::path& path);
void write_cameras(const fs::path& path, const std::vector<CameraEntry>& cameras);

/// Image files in a directory sorted by file name.
std::vector<fs::path> list_images(const fs::path& dir);

}  // namespace ggs::io
