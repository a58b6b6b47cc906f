// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Exact K-D tree over 3D points.
#pragma once

#include "ggs/types.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace ggs {

/// dx*dx + dy*dy + dz*dz, evaluated in that order so every caller agrees on
/// ties bit for bit.
inline double squared_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x() - b.x();
    const double dy = a.y() - b.y();
    const double dz = a.z() - b.z();
    return dx * dx + dy * dy + dz * dz;
}

struct Neighbor {
    int index = -1;
    double squared_distance = std::numeric_limits<double>::infinity();

    [[nodiscard]] double distance() const;

    /// Orders by distance, then by index.
    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        return a.squared_distance < b.squared_distance ||
               (a.squared_distance == b.squared_distance && a.index < b.index);
    }
    bool operator==(const Neighbor&) const = default;
};

/// Balanced K-D tree. Immutable after construction; concurrent queries are
/// safe. Results are exact and ties resolve to the lowest point index, so they
/// agree with a linear scan in index order.
class SpatialIndex {
public:
    static constexpr int kDefaultLeafSize = 8;

    /// Throws InvalidInput on an empty point set.
    explicit SpatialIndex(std::vector<Vec3> points, int leaf_size = kDefaultLeafSize);

    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] const std::vector<Vec3>& points() const { return points_; }
    [[nodiscard]] const Vec3& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] int leaf_size() const { return leaf_size_; }

    [[nodiscard]] Neighbor nearest(const Vec3& query) const;

    /// The k closest points sorted by (distance, index). Skips point
    /// `exclude` when it is non-negative.
    [[nodiscard]] std::vector<Neighbor> knn(const Vec3& query, int k, int exclude = -1) const;

    /// All points with squared distance <= r2, sorted by (distance, index).
    [[nodiscard]] std::vector<Neighbor> radius(const Vec3& query, double r2, int exclude = -1) const;

private:
    struct Node {
        // Leaf when axis < 0; [begin, end) indexes order_.
        int axis = -1;
        double split = 0.0;
        int left = -1;
        int right = -1;
        int begin = 0;
        int end = 0;
    };

    int build(int begin, int end, int depth);
    void nearest_rec(int node, const Vec3& q, Neighbor& best) const;
    void knn_rec(int node, const Vec3& q, std::size_t k, int exclude, std::vector<Neighbor>& heap) const;
    void radius_rec(int node, const Vec3& q, double r2, int exclude, std::vector<Neighbor>& out) const;

    std::vector<Vec3> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int leaf_size_;
    int root_ = -1;
};

/// Builds an index over the positions of a dense cloud.
SpatialIndex build_index(const DensePointCloud& cloud, int leaf_size = SpatialIndex::kDefaultLeafSize);

}  // namespace ggs
