// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Geometry-only multi-view stereo: fronto-parallel plane sweep scored by
// NCC at reduced resolution, forward-backward consistency filtering, and
// fusion into an oriented point cloud.
#pragma once

#include "ggs/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace ggs {

struct MvsConfig {
    int downsample = 4;
    int planes = 128;
    /// Depth search range; both zero selects it from the camera rig (see
    /// auto_depth_range).
    double depth_min = 0.0;
    double depth_max = 0.0;
    int window = 7;
    int neighbors = 4;
    int min_consistent = 2;
    double reprojection_tolerance = 1.0;  // px at working resolution
    double depth_tolerance = 0.01;        // relative
    int consistency_iterations = 1;
    double min_ncc = 0.3;
    /// Parabolic refinement of the NCC peak between neighboring planes.
    bool subplane_refinement = true;
    int normal_neighbors = 16;

    /// Throws ConfigError on out-of-range values. A zero depth range is
    /// accepted (auto).
    void validate() const;
    [[nodiscard]] bool has_depth_range() const { return depth_min > 0.0 || depth_max > 0.0; }
};

struct MvsView {
    int id = 0;
    CameraModel camera;
    Image image;  // full resolution, gray or RGB
};

/// Gray image box-averaged by `factor`, with matching intrinsics.
struct WorkingView {
    int id = 0;
    CameraModel camera;
    Image gray;
};
WorkingView prepare_view(const MvsView& view, int factor);

/// Inverse-depth hypotheses from far to near, uniformly spaced.
std::vector<double> depth_hypotheses(double depth_min, double depth_max, int planes);
/// Spacing of the hypotheses in inverse depth.
double inverse_depth_step(double depth_min, double depth_max, int planes);

/// Depth range from the point closest (least squares) to all optical axes:
/// [0.5 D, 1.5 D] with D the largest camera distance to it. ConfigError when
/// the axes are (near) parallel.
std::pair<double, double> auto_depth_range(const std::vector<CameraModel>& cameras);

/// Indices of the `count` views whose optical axes are closest in angle to
/// view `ref` (ties by index).
std::vector<int> select_neighbors(const std::vector<CameraModel>& cameras, int ref, int count);

/// Winner-take-all plane sweep for one reference view. Pixels whose best
/// mean NCC is below min_ncc, whose peak sits on the first or last plane, or
/// whose window crosses the border, are 0.
/// Neighbors sharing the reference camera center throw InvalidInput naming
/// both view ids.
DepthMap estimate_depth(const WorkingView& ref, const std::vector<const WorkingView*>& neighbors,
                        const MvsConfig& config);
DepthMap estimate_depth(const MvsView& ref, const std::vector<const MvsView*>& neighbors, const MvsConfig& config);

/// Keeps a pixel when its point, projected into at least min_consistent
/// other views, finds a depth there that projects back within the pixel and
/// depth tolerances. Cameras must match the depth map resolution. Every
/// pass only removes pixels.
std::vector<DepthMap> consistency_filter(const std::vector<DepthMap>& maps, const std::vector<CameraModel>& cameras,
                                         const MvsConfig& config, std::vector<std::string>* warnings = nullptr);

struct FusionStats {
    std::size_t input_points = 0;
    std::size_t fused_points = 0;
    double voxel_size = 0.0;
    std::size_t fallback_points = 0;  // merged points that kept a contributor instead of the mean
};

/// Back-projects every valid pixel, merges points sharing a voxel whose
/// edge is the median pixel footprint, and estimates normals by PCA over
/// the nearest fused points, oriented toward each point's source camera.
/// Throws Error when nothing survives.
DensePointCloud fuse(const std::vector<DepthMap>& maps, const std::vector<CameraModel>& cameras,
                     const MvsConfig& config = {}, FusionStats* stats = nullptr,
                     std::vector<int>* source_view = nullptr);

struct MvsResult {
    DensePointCloud cloud;
    std::vector<DepthMap> raw_depths;
    std::vector<DepthMap> filtered_depths;
    std::vector<CameraModel> working_cameras;
    /// Source view index (into the input list) per fused point.
    std::vector<int> source_view;
    FusionStats fusion;
    std::vector<std::pair<std::string, double>> timings;  // stage -> seconds
    std::vector<std::string> warnings;
    double depth_min = 0.0;
    double depth_max = 0.0;
};

/// End to end: prepare, sweep every view, filter, fuse.
MvsResult reconstruct(const std::vector<MvsView>& views, const MvsConfig& config);

}  // namespace ggs
