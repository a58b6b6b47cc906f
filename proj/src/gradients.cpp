// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/gradients.hpp"

#include <cmath>

namespace ggs {

bool PrimitiveGradient::all_finite() const {
    return position.allFinite() && rotation.allFinite() && log_scale.allFinite() &&
           std::isfinite(opacity_logit) && color.allFinite();
}

bool GradientSet::all_finite() const {
    for (const auto& e : entries) {
        if (!e.all_finite()) {
            return false;
        }
    }
    return true;
}

GradientSet& GradientSet::operator+=(const GradientSet& o) {
    if (o.size() != size()) {
        throw InvalidInput("gradient sets differ in size");
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i] += o.entries[i];
    }
    return *this;
}

std::array<double, kParamsPerPrimitive> pack_parameters(const GaussianPrimitive& g) {
    return {g.position[0], g.position[1], g.position[2],
            g.rotation[0], g.rotation[1], g.rotation[2], g.rotation[3],
            g.log_scale[0], g.log_scale[1], g.log_scale[2],
            g.opacity_logit,
            g.color[0], g.color[1], g.color[2]};
}

void unpack_parameters(const std::array<double, kParamsPerPrimitive>& p, GaussianPrimitive& g) {
    g.position = {p[0], p[1], p[2]};
    g.rotation = {p[3], p[4], p[5], p[6]};
    g.log_scale = {p[7], p[8], p[9]};
    g.opacity_logit = p[10];
    g.color = {p[11], p[12], p[13]};
}

std::array<double, kParamsPerPrimitive> pack_gradient(const PrimitiveGradient& g) {
    return {g.position[0], g.position[1], g.position[2],
            g.rotation[0], g.rotation[1], g.rotation[2], g.rotation[3],
            g.log_scale[0], g.log_scale[1], g.log_scale[2],
            g.opacity_logit,
            g.color[0], g.color[1], g.color[2]};
}

}  // namespace ggs
