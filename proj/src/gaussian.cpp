// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/gaussian.hpp"

#include <cmath>

namespace ggs {

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInput("logit: probability must lie in (0, 1)");
    }
    return std::log(p / (1.0 - p));
}

double GaussianPrimitive::opacity() const { return sigmoid(opacity_logit); }

Vec4 normalize_quaternion(const Vec4& q) {
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidInput("quaternion has zero or non-finite norm");
    }
    return q / n;
}

Mat3 quat_to_rotation_matrix(const Vec4& q_raw) {
    const Vec4 q = normalize_quaternion(q_raw);
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 r;
    r << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
         2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
         2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
    return r;
}

Vec4 rotation_matrix_to_quat(const Mat3& r) {
    // Shepperd's method, branch on the largest diagonal term.
    Vec4 q;
    const double tr = r.trace();
    if (tr > 0.0) {
        const double s = std::sqrt(tr + 1.0) * 2.0;
        q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s;
    } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
        const double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
        q << (r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s;
    } else if (r(1, 1) > r(2, 2)) {
        const double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
        q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s;
    } else {
        const double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
        q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s;
    }
    if (q[0] < 0.0) {
        q = -q;
    }
    return q.normalized();
}

Vec4 quat_gradient_from_rotation(const Vec4& q_raw, const Mat3& g) {
    const double n = q_raw.norm();
    const Vec4 q = normalize_quaternion(q_raw);
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Vec4 d_unit;
    d_unit[0] = 2.0 * (-z * g(0, 1) + y * g(0, 2) + z * g(1, 0) - x * g(1, 2) - y * g(2, 0) + x * g(2, 1));
    d_unit[1] = 2.0 * (y * g(0, 1) + z * g(0, 2) + y * g(1, 0) - 2.0 * x * g(1, 1) - w * g(1, 2) +
                       z * g(2, 0) + w * g(2, 1) - 2.0 * x * g(2, 2));
    d_unit[2] = 2.0 * (-2.0 * y * g(0, 0) + x * g(0, 1) + w * g(0, 2) + x * g(1, 0) + z * g(1, 2) -
                       w * g(2, 0) + z * g(2, 1) - 2.0 * y * g(2, 2));
    d_unit[3] = 2.0 * (-2.0 * z * g(0, 0) - w * g(0, 1) + x * g(0, 2) + w * g(1, 0) - 2.0 * z * g(1, 1) +
                       y * g(1, 2) + x * g(2, 0) + y * g(2, 1));
    // Project through q / |q|.
    return (d_unit - q * q.dot(d_unit)) / n;
}

Mat3 assemble_covariance(const GaussianPrimitive& g) {
    const Mat3 r = quat_to_rotation_matrix(g.rotation);
    const Vec3 s2 = (2.0 * g.log_scale).array().exp();
    Mat3 sigma = r * s2.asDiagonal() * r.transpose();
    // Mirror the upper triangle so symmetry is exact rather than approximate.
    sigma(1, 0) = sigma(0, 1);
    sigma(2, 0) = sigma(0, 2);
    sigma(2, 1) = sigma(1, 2);
    return sigma;
}

double eval_density(const GaussianPrimitive& g, const Vec3& offset) {
    // Sigma^-1 = R S^-2 R^T; avoids inverting an ill-conditioned matrix.
    const Mat3 r = quat_to_rotation_matrix(g.rotation);
    const Vec3 local = r.transpose() * offset;
    const Vec3 inv_s2 = (-2.0 * g.log_scale).array().exp();
    const double m = local.cwiseProduct(local).dot(inv_s2);
    return std::exp(-0.5 * m);
}

int min_scale_axis(const GaussianPrimitive& g) {
    int best = 0;
    for (int k = 1; k < 3; ++k) {
        if (g.log_scale[k] < g.log_scale[best]) {
            best = k;
        }
    }
    return best;
}

}  // namespace ggs
