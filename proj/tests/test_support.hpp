// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test suites: seeded generators and finite
// differences.
#pragma once

#include "ggs/gaussian.hpp"
#include "ggs/gradients.hpp"
#include "ggs/types.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace ggs::testing {

inline Vec3 random_vec3(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng), u(rng), u(rng)};
}

inline Vec4 random_quaternion(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec4 q{n(rng), n(rng), n(rng), n(rng)};
    return q.normalized();
}

inline GaussianPrimitive random_primitive(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GaussianPrimitive g;
    g.position = random_vec3(rng, -1.0, 1.0);
    g.rotation = random_quaternion(rng);
    g.log_scale = random_vec3(rng, -2.0, 0.5);
    g.opacity_logit = 2.0 * u(rng);
    g.color = random_vec3(rng, 0.0, 1.0);
    return g;
}

/// Central difference of f along one parameter of primitive i.
inline double central_difference(GaussianCloud cloud, std::size_t i, int param, double h,
                                 const std::function<double(const GaussianCloud&)>& f) {
    auto p = pack_parameters(cloud[i]);
    const double x0 = p[static_cast<std::size_t>(param)];
    p[static_cast<std::size_t>(param)] = x0 + h;
    unpack_parameters(p, cloud[i]);
    const double fp = f(cloud);
    p[static_cast<std::size_t>(param)] = x0 - h;
    unpack_parameters(p, cloud[i]);
    const double fm = f(cloud);
    return (fp - fm) / (2.0 * h);
}

/// Relative error with an absolute floor for values near zero.
inline double relative_error(double analytic, double numeric, double abs_floor) {
    const double diff = std::abs(analytic - numeric);
    if (diff <= abs_floor) {
        return 0.0;
    }
    return diff / std::max(std::abs(analytic), std::abs(numeric));
}

/// Uniform sample on the unit sphere.
inline Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v{n(rng), n(rng), n(rng)};
    return v.normalized();
}

}  // namespace ggs::testing
