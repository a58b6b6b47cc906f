// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// CPU splatting renderer: EWA projection, tile binning, front-to-back alpha
// compositing and the matching reverse pass.
#pragma once

#include "ggs/gradients.hpp"
#include "ggs/types.hpp"

#include <vector>

namespace ggs {

struct RenderOptions {
    Vec3 background = Vec3::Zero();
    int tile_size = 16;
    double near_plane = 0.01;
    /// Added to the diagonal of every 2D covariance, in px^2.
    double covariance_floor = 0.3;
    /// Splats are evaluated inside this Mahalanobis radius only.
    double sigma_cutoff = 3.0;
    /// Contributions with alpha below this are skipped.
    double min_alpha = 1.0 / 255.0;
};

/// Screen-space footprint of one Gaussian plus the intermediates the reverse
/// pass needs.
struct ProjectedGaussian {
    bool visible = false;
    Vec2 mean = Vec2::Zero();
    Mat2 covariance = Mat2::Identity();
    Mat2 conic = Mat2::Identity();
    double depth = 0.0;
    double opacity = 0.0;
    // Pixel bounding box, inclusive.
    int x_min = 0, x_max = -1, y_min = 0, y_max = -1;

    Vec3 camera_point = Vec3::Zero();
    Eigen::Matrix<double, 2, 3> jacobian = Eigen::Matrix<double, 2, 3>::Zero();
    Mat3 camera_covariance = Mat3::Zero();
    Mat3 rotation = Mat3::Identity();
    Vec3 squared_scales = Vec3::Ones();
};

/// Projects g through cam. Gaussians closer than the near plane come back
/// with visible = false.
ProjectedGaussian project_gaussian(const GaussianPrimitive& g, const CameraModel& cam,
                                   const RenderOptions& options = {});

struct RenderedFrame {
    Image color;          // H x W x 3
    Image depth;          // H x W x 1, alpha-normalized expected center depth; 0 where empty
    Image alpha;          // H x W x 1, sum of compositing weights
    Image transmittance;  // H x W x 1, residual transmittance
};

/// Output of render(): the frame plus the state backward() replays.
struct RenderResult {
    RenderedFrame frame;
    CameraModel camera;
    RenderOptions options;
    std::vector<ProjectedGaussian> projected;
    /// Visible Gaussian ids sorted front to back by (depth, index).
    std::vector<int> sorted;
    /// Per tile, the sorted Gaussian ids overlapping it.
    std::vector<std::vector<int>> tiles;
    int tiles_x = 0;
    int tiles_y = 0;
    std::size_t culled = 0;
};

RenderResult render(const GaussianCloud& gaussians, const CameraModel& cam, const RenderOptions& options = {});

/// Gradient of a loss wrt every Gaussian parameter given dL/d(color image).
/// Culled and off-screen Gaussians receive zero gradient.
GradientSet backward(const RenderResult& result, const GaussianCloud& gaussians, const Image& d_color);

struct PhotometricLoss {
    double value = 0.0;
    double l1 = 0.0;
    double ssim = 1.0;
    Image gradient;  // dL/d(rendered color)
};

inline constexpr double kDssimWeight = 0.2;

/// (1 - lambda) * L1 + lambda * (1 - SSIM) / 2 and its gradient wrt the
/// rendered image. Throws InvalidInput on a shape mismatch.
PhotometricLoss photometric_loss(const Image& rendered, const Image& target, double lambda = kDssimWeight);

}  // namespace ggs
