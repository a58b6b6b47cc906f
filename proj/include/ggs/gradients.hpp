// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ggs/types.hpp"

#include <vector>

namespace ggs {

/// Partial derivatives of a scalar loss wrt one primitive's raw parameters.
struct PrimitiveGradient {
    Vec3 position = Vec3::Zero();
    Vec4 rotation = Vec4::Zero();
    Vec3 log_scale = Vec3::Zero();
    double opacity_logit = 0.0;
    Vec3 color = Vec3::Zero();

    PrimitiveGradient& operator+=(const PrimitiveGradient& o) {
        position += o.position;
        rotation += o.rotation;
        log_scale += o.log_scale;
        opacity_logit += o.opacity_logit;
        color += o.color;
        return *this;
    }
    [[nodiscard]] bool all_finite() const;
    bool operator==(const PrimitiveGradient&) const = default;
};

/// One PrimitiveGradient per Gaussian, in cloud order.
struct GradientSet {
    std::vector<PrimitiveGradient> entries;

    GradientSet() = default;
    explicit GradientSet(std::size_t n) : entries(n) {}

    [[nodiscard]] std::size_t size() const { return entries.size(); }
    PrimitiveGradient& operator[](std::size_t i) { return entries[i]; }
    const PrimitiveGradient& operator[](std::size_t i) const { return entries[i]; }
    [[nodiscard]] bool all_finite() const;

    GradientSet& operator+=(const GradientSet& o);
    bool operator==(const GradientSet&) const = default;
};

/// Number of scalar parameters per primitive (3 + 4 + 3 + 1 + 3).
inline constexpr int kParamsPerPrimitive = 14;

/// Flat view of a primitive's parameters in the order
/// position, rotation, log_scale, opacity_logit, color.
std::array<double, kParamsPerPrimitive> pack_parameters(const GaussianPrimitive& g);
void unpack_parameters(const std::array<double, kParamsPerPrimitive>& p, GaussianPrimitive& g);
std::array<double, kParamsPerPrimitive> pack_gradient(const PrimitiveGradient& g);

}  // namespace ggs
