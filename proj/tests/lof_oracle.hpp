// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ggs/types.hpp"

#include <algorithm>
#include <vector>

namespace ggs::testing {

// From-scratch LOF over the full distance matrix.
struct BruteLof {
    std::vector<Vec3> pts;
    int k;
    std::vector<double> kdist, lrd;

    BruteLof(std::vector<Vec3> p, int k_) : pts(std::move(p)), k(k_) {
        const std::size_t n = pts.size();
        kdist.resize(n);
        lrd.resize(n);
        for (std::size_t i = 0; i < n; ++i) kdist[i] = kth(pts[i], static_cast<int>(i));
        for (std::size_t i = 0; i < n; ++i) lrd[i] = density(pts[i], static_cast<int>(i));
    }
    [[nodiscard]] double dist(const Vec3& a, std::size_t j) const { return (a - pts[j]).norm(); }
    [[nodiscard]] double kth(const Vec3& q, int self) const {
        std::vector<double> d;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (static_cast<int>(j) != self) d.push_back(dist(q, j));
        std::sort(d.begin(), d.end());
        return d[static_cast<std::size_t>(k) - 1];
    }
    [[nodiscard]] std::vector<std::size_t> hood(const Vec3& q, int self) const {
        const double kd = kth(q, self);
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (static_cast<int>(j) != self && dist(q, j) <= kd * (1.0 + 1e-12)) out.push_back(j);
        return out;
    }
    [[nodiscard]] double density(const Vec3& q, int self) const {
        const auto h = hood(q, self);
        double s = 0.0;
        for (auto j : h) s += std::max(kdist[j], dist(q, j));
        const double mean = s / static_cast<double>(h.size());
        return mean > 0.0 ? std::min(1.0 / mean, 1e12) : 1e12;
    }
    [[nodiscard]] double lof(const Vec3& q, int self) const {
        const auto h = hood(q, self);
        double s = 0.0;
        for (auto j : h) s += lrd[j];
        return s / static_cast<double>(h.size()) / density(q, self);
    }
};

}  // namespace ggs::testing
