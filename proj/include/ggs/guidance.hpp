// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Dense-cloud guidance for Gaussians: nearest-point pairing, position
// snapping and paired normals for the rotation loss.
#pragma once

#include "ggs/spatial_index.hpp"
#include "ggs/types.hpp"

#include <utility>
#include <vector>

namespace ggs {

/// For Gaussian i: index of its nearest cloud point and the Euclidean
/// distance between the Gaussian center and that point.
struct GuidancePairing {
    std::vector<int> point_index;
    std::vector<double> distance;

    [[nodiscard]] std::size_t size() const { return point_index.size(); }
};

/// Nearest cloud point to p: (point index, Euclidean distance).
std::pair<int, double> nearest(const SpatialIndex& index, const Vec3& p);

/// Pairs every Gaussian with its nearest cloud point without moving it.
GuidancePairing pair_gaussians(const GaussianCloud& gaussians, const SpatialIndex& index);

/// Moves each Gaussian center onto its nearest cloud point. With blend = 1
/// the new position is exactly the cloud point; smaller values interpolate
/// toward it. All other fields are untouched. The returned pairing refers to
/// the pre-snap positions.
std::pair<GaussianCloud, GuidancePairing> snap_gaussians(const GaussianCloud& gaussians,
                                                        const SpatialIndex& index, double blend = 1.0);

/// Output i is the cloud normal of Gaussian i's paired point.
std::vector<Vec3> paired_normals(const GuidancePairing& pairing, const DensePointCloud& cloud);

}  // namespace ggs
