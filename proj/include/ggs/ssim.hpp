// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ggs/types.hpp"

namespace ggs {

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// Mean structural similarity over all pixels and channels. Local statistics
/// use a separable Gaussian window with zero padding at the borders. When
/// grad_a is non-null it receives d(mean SSIM)/d(a).
/// Throws InvalidInput on a shape mismatch.
double ssim(const Image& a, const Image& b, Image* grad_a = nullptr, const SsimParams& params = {});

}  // namespace ggs
