// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ggs {

double Neighbor::distance() const { return std::sqrt(squared_distance); }

SpatialIndex::SpatialIndex(std::vector<Vec3> points, int leaf_size)
    : points_(std::move(points)), leaf_size_(std::max(1, leaf_size)) {
    if (points_.empty()) {
        throw InvalidInput("cannot build a spatial index over an empty point set");
    }
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * points_.size() / static_cast<std::size_t>(leaf_size_) + 1);
    root_ = build(0, static_cast<int>(points_.size()), 0);
}

int SpatialIndex::build(int begin, int end, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{});
    if (end - begin <= leaf_size_) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }
    // Split along the axis of largest extent.
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (int i = begin; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi[axis] == lo[axis]) {
        // All points coincide; keep them in one leaf.
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                         const double va = points_[a][axis];
                         const double vb = points_[b][axis];
                         return va < vb || (va == vb && a < b);
                     });
    const double split = points_[order_[mid]][axis];
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    Node& n = nodes_[id];
    n.axis = axis;
    n.split = split;
    n.left = left;
    n.right = right;
    n.begin = begin;
    n.end = end;
    return id;
}

// Left subtree holds coordinates <= split, right subtree >= split.
void SpatialIndex::nearest_rec(int node_id, const Vec3& q, Neighbor& best) const {
    const Node& n = nodes_[node_id];
    if (n.axis < 0) {
        for (int i = n.begin; i < n.end; ++i) {
            const Neighbor cand{order_[i], squared_distance(q, points_[order_[i]])};
            if (cand < best) {
                best = cand;
            }
        }
        return;
    }
    const double diff = q[n.axis] - n.split;
    const int first = diff <= 0.0 ? n.left : n.right;
    const int second = diff <= 0.0 ? n.right : n.left;
    nearest_rec(first, q, best);
    if (diff * diff <= best.squared_distance) {
        nearest_rec(second, q, best);
    }
}

Neighbor SpatialIndex::nearest(const Vec3& query) const {
    Neighbor best;
    nearest_rec(root_, query, best);
    return best;
}

void SpatialIndex::knn_rec(int node_id, const Vec3& q, std::size_t k, int exclude,
                           std::vector<Neighbor>& heap) const {
    const Node& n = nodes_[node_id];
    if (n.axis < 0) {
        for (int i = n.begin; i < n.end; ++i) {
            const int idx = order_[i];
            if (idx == exclude) {
                continue;
            }
            const Neighbor cand{idx, squared_distance(q, points_[idx])};
            if (heap.size() < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        return;
    }
    const double diff = q[n.axis] - n.split;
    const int first = diff <= 0.0 ? n.left : n.right;
    const int second = diff <= 0.0 ? n.right : n.left;
    knn_rec(first, q, k, exclude, heap);
    if (heap.size() < k || diff * diff <= heap.front().squared_distance) {
        knn_rec(second, q, k, exclude, heap);
    }
}

std::vector<Neighbor> SpatialIndex::knn(const Vec3& query, int k, int exclude) const {
    std::vector<Neighbor> heap;
    if (k <= 0) {
        return heap;
    }
    heap.reserve(static_cast<std::size_t>(k));
    knn_rec(root_, query, static_cast<std::size_t>(k), exclude, heap);
    std::sort_heap(heap.begin(), heap.end());
    return heap;
}

void SpatialIndex::radius_rec(int node_id, const Vec3& q, double r2, int exclude,
                              std::vector<Neighbor>& out) const {
    const Node& n = nodes_[node_id];
    if (n.axis < 0) {
        for (int i = n.begin; i < n.end; ++i) {
            const int idx = order_[i];
            if (idx == exclude) {
                continue;
            }
            const double d2 = squared_distance(q, points_[idx]);
            if (d2 <= r2) {
                out.push_back({idx, d2});
            }
        }
        return;
    }
    const double diff = q[n.axis] - n.split;
    const int first = diff <= 0.0 ? n.left : n.right;
    const int second = diff <= 0.0 ? n.right : n.left;
    radius_rec(first, q, r2, exclude, out);
    if (diff * diff <= r2) {
        radius_rec(second, q, r2, exclude, out);
    }
}

std::vector<Neighbor> SpatialIndex::radius(const Vec3& query, double r2, int exclude) const {
    std::vector<Neighbor> out;
    radius_rec(root_, query, r2, exclude, out);
    std::sort(out.begin(), out.end());
    return out;
}

SpatialIndex build_index(const DensePointCloud& cloud, int leaf_size) {
    if (cloud.empty()) {
        throw InvalidInput("build_index: dense point cloud is empty");
    }
    return SpatialIndex(cloud.positions, leaf_size);
}

}  // namespace ggs
