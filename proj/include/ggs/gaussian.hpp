// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Covariance assembly and density evaluation for Gaussian primitives.
#pragma once

#include "ggs/types.hpp"

namespace ggs {

double sigmoid(double x);
double logit(double p);

/// Unit quaternion (w, x, y, z). Throws InvalidInput on a zero quaternion.
Vec4 normalize_quaternion(const Vec4& q);

/// Rotation matrix of q after renormalization. Throws InvalidInput on zero q.
Mat3 quat_to_rotation_matrix(const Vec4& q);

/// Quaternion (w, x, y, z) of a rotation matrix.
Vec4 rotation_matrix_to_quat(const Mat3& r);

/// Gradient of a scalar wrt the raw (unnormalized) quaternion q, given the
/// gradient wrt the rotation matrix R(q / |q|).
Vec4 quat_gradient_from_rotation(const Vec4& q, const Mat3& d_rotation);

/// Sigma = R S S^T R^T. The result is exactly symmetric.
Mat3 assemble_covariance(const GaussianPrimitive& g);

/// exp(-0.5 x^T Sigma^-1 x) with x relative to the primitive's center.
double eval_density(const GaussianPrimitive& g, const Vec3& offset);

/// Index of the smallest activated scale; ties go to the lowest index.
int min_scale_axis(const GaussianPrimitive& g);

}  // namespace ggs
