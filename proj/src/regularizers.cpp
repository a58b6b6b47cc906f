// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/regularizers.hpp"

#include "ggs/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ggs {
namespace {

Vec3 normalized_or_throw(const Vec3& v, const char* what) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidInput(std::string("loss_normal: ") + what + " vector is zero or non-finite");
    }
    return v / n;
}

void check_normals(const GaussianCloud& gaussians, std::span<const Vec3> normals, double beta) {
    if (normals.size() == gaussians.size()) {
        return;
    }
    if (normals.empty() && beta == 0.0) {
        return;
    }
    throw InvalidInput("paired normal count " + std::to_string(normals.size()) +
                       " does not match Gaussian count " + std::to_string(gaussians.size()));
}

}  // namespace

double loss_thin(const GaussianPrimitive& g) { return std::exp(g.log_scale[min_scale_axis(g)]); }

double mean_loss_thin(const GaussianCloud& gaussians) {
    if (gaussians.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& g : gaussians.primitives) {
        sum += loss_thin(g);
    }
    return sum / static_cast<double>(gaussians.size());
}

Vec3 disk_normal(const GaussianPrimitive& g) {
    return quat_to_rotation_matrix(g.rotation).col(min_scale_axis(g));
}

double loss_normal(const Vec3& n, const Vec3& m) {
    const Vec3 nn = normalized_or_throw(n, "disk normal");
    const Vec3 mm = normalized_or_throw(m, "reference normal");
    return std::clamp(1.0 - std::abs(mm.dot(nn)), 0.0, 1.0);
}

double mean_loss_normal(const GaussianCloud& gaussians, std::span<const Vec3> paired) {
    if (paired.size() != gaussians.size()) {
        throw InvalidInput("paired normal count does not match Gaussian count");
    }
    if (gaussians.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < gaussians.size(); ++i) {
        sum += loss_normal(disk_normal(gaussians[i]), paired[i]);
    }
    return sum / static_cast<double>(gaussians.size());
}

LossBreakdown total_loss(double l_rgb, const GaussianCloud& gaussians, std::span<const Vec3> paired,
                         const LossWeights& weights) {
    check_normals(gaussians, paired, weights.beta);
    LossBreakdown b;
    b.alpha = weights.alpha;
    b.beta = weights.beta;
    b.l_rgb = l_rgb;
    b.l_thin = mean_loss_thin(gaussians);
    b.l_normal = paired.empty() ? 0.0 : mean_loss_normal(gaussians, paired);
    b.total = b.l_rgb + b.alpha * b.l_thin + b.beta * b.l_normal;
    return b;
}

GradientSet analytic_gradients(const GaussianCloud& gaussians, std::span<const Vec3> paired,
                               const GradientSet& photometric, const LossWeights& weights) {
    check_normals(gaussians, paired, weights.beta);
    if (!photometric.entries.empty() && photometric.size() != gaussians.size()) {
        throw InvalidInput("photometric gradient count does not match Gaussian count");
    }
    GradientSet out = photometric.entries.empty() ? GradientSet(gaussians.size()) : photometric;
    if (gaussians.empty()) {
        return out;
    }
    const double inv_n = 1.0 / static_cast<double>(gaussians.size());
    for (std::size_t i = 0; i < gaussians.size(); ++i) {
        const GaussianPrimitive& g = gaussians[i];
        const int axis = min_scale_axis(g);
        if (weights.alpha != 0.0) {
            // d exp(l) / dl = exp(l), routed to the lowest-index argmin only.
            out[i].log_scale[axis] += weights.alpha * inv_n * std::exp(g.log_scale[axis]);
        }
        if (weights.beta != 0.0 && !paired.empty()) {
            const Mat3 r = quat_to_rotation_matrix(g.rotation);
            const Vec3 n = r.col(axis);
            const Vec3 m = normalized_or_throw(paired[i], "reference normal");
            const double dot = m.dot(n);
            const double sign = dot > 0.0 ? 1.0 : (dot < 0.0 ? -1.0 : 0.0);
            Mat3 d_rot = Mat3::Zero();
            d_rot.col(axis) = -sign * m;
            out[i].rotation += weights.beta * inv_n * quat_gradient_from_rotation(g.rotation, d_rot);
        }
    }
    return out;
}

}  // namespace ggs
