// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Flattening and normal-alignment regularizers, the weighted total loss and
// their analytic gradients.
#pragma once

#include "ggs/gradients.hpp"
#include "ggs/types.hpp"

#include <span>
#include <vector>

namespace ggs {

struct LossWeights {
    double alpha = 100.0;  // flattening
    double beta = 0.1;     // normal alignment
};

struct LossBreakdown {
    double l_rgb = 0.0;
    double l_thin = 0.0;
    double l_normal = 0.0;
    double total = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Smallest activated scale of g.
double loss_thin(const GaussianPrimitive& g);

/// Mean of loss_thin over the cloud (0 for an empty cloud).
double mean_loss_thin(const GaussianCloud& gaussians);

/// Rotated axis of the smallest scale: the normal of the flattened disk.
Vec3 disk_normal(const GaussianPrimitive& g);

/// 1 - |m . n| after normalizing both inputs. Throws InvalidInput when either
/// vector is zero.
double loss_normal(const Vec3& n, const Vec3& m);

/// Mean of loss_normal(disk_normal(g_i), m_i).
double mean_loss_normal(const GaussianCloud& gaussians, std::span<const Vec3> paired_normals);

/// l_rgb + alpha * mean l_thin + beta * mean l_normal. An empty normal list
/// is accepted when beta is 0 and contributes l_normal = 0; any other size
/// mismatch throws InvalidInput.
LossBreakdown total_loss(double l_rgb, const GaussianCloud& gaussians,
                         std::span<const Vec3> paired_normals, const LossWeights& weights = {});

/// photometric + alpha * d(mean l_thin) + beta * d(mean l_normal).
/// The normal term only reaches the rotation quaternion; the paired normals
/// are treated as constants. Pass an empty photometric set for geometry-only
/// gradients.
GradientSet analytic_gradients(const GaussianCloud& gaussians, std::span<const Vec3> paired_normals,
                               const GradientSet& photometric, const LossWeights& weights = {});

}  // namespace ggs
