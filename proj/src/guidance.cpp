// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/guidance.hpp"

#include "ggs/parallel.hpp"

#include <string>

namespace ggs {

std::pair<int, double> nearest(const SpatialIndex& index, const Vec3& p) {
    const Neighbor n = index.nearest(p);
    return {n.index, n.distance()};
}

GuidancePairing pair_gaussians(const GaussianCloud& gaussians, const SpatialIndex& index) {
    GuidancePairing pairing;
    pairing.point_index.resize(gaussians.size());
    pairing.distance.resize(gaussians.size());
    parallel_for(gaussians.size(), [&](std::size_t i) {
        const auto [idx, dist] = nearest(index, gaussians[i].position);
        pairing.point_index[i] = idx;
        pairing.distance[i] = dist;
    });
    return pairing;
}

std::pair<GaussianCloud, GuidancePairing> snap_gaussians(const GaussianCloud& gaussians,
                                                        const SpatialIndex& index, double blend) {
    if (!(blend >= 0.0 && blend <= 1.0)) {
        throw InvalidInput("snap blend factor must lie in [0, 1]");
    }
    GuidancePairing pairing = pair_gaussians(gaussians, index);
    GaussianCloud out = gaussians;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec3& target = index.point(pairing.point_index[i]);
        if (blend == 1.0) {
            out[i].position = target;
        } else {
            out[i].position += blend * (target - out[i].position);
        }
    }
    return {std::move(out), std::move(pairing)};
}

std::vector<Vec3> paired_normals(const GuidancePairing& pairing, const DensePointCloud& cloud) {
    std::vector<Vec3> normals;
    normals.reserve(pairing.size());
    for (int idx : pairing.point_index) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= cloud.normals.size()) {
            throw InvalidInput("pairing references point " + std::to_string(idx) + " outside the cloud");
        }
        normals.push_back(cloud.normals[static_cast<std::size_t>(idx)]);
    }
    return normals;
}

}  // namespace ggs
