// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Local Outlier Factor fitted on a dense reference cloud and used to cut
// stray layers and fragments out of an extracted mesh.
#pragma once

#include "ggs/spatial_index.hpp"
#include "ggs/types.hpp"

#include <memory>
#include <vector>

namespace ggs {

/// Local reachability densities are capped here so that duplicate points
/// (zero reachability) keep scores finite.
inline constexpr double kMaxLrd = 1e12;

/// The k-neighborhood includes every point tied with the k-th distance, so
/// it may hold more than k points.
class LofModel {
public:
    /// Throws InvalidInput unless k >= 1 and the cloud has more than k points.
    static LofModel fit(const std::vector<Vec3>& reference, int k);
    static LofModel fit(const DensePointCloud& cloud, int k) { return fit(cloud.positions, k); }

    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] std::size_t size() const { return k_distance_.size(); }
    [[nodiscard]] const std::vector<double>& k_distances() const { return k_distance_; }
    [[nodiscard]] const std::vector<double>& lrds() const { return lrd_; }

    /// LOF of an outside query against the reference set (not inserted).
    [[nodiscard]] double score(const Vec3& query) const;
    /// LOF of reference point i within the reference set.
    [[nodiscard]] double reference_score(int i) const;
    /// Parallel scoring of many queries.
    [[nodiscard]] std::vector<double> score_all(const std::vector<Vec3>& queries) const;

private:
    [[nodiscard]] std::vector<Neighbor> neighborhood(const Vec3& q, int exclude) const;
    [[nodiscard]] double lof_of(const std::vector<Neighbor>& nb) const;

    std::shared_ptr<const SpatialIndex> index_;
    int k_ = 0;
    std::vector<double> k_distance_;
    std::vector<double> lrd_;
};

struct DenoiseOptions {
    double threshold = 1.5;
    /// Components with fewer faces than this fraction of the largest are dropped.
    double min_component_fraction = 0.005;
};

struct DenoiseStats {
    std::size_t outlier_vertices = 0;
    std::size_t faces_removed_lof = 0;
    std::size_t faces_removed_components = 0;
    std::size_t components_before = 0;  // after the LOF pass
    std::size_t components_after = 0;
};

struct DenoiseResult {
    TriangleMesh mesh;
    /// Input face index of every output face.
    std::vector<int> kept_faces;
    std::vector<double> vertex_scores;  // per input vertex
    DenoiseStats stats;
};

/// Removes faces touching a vertex with LOF above the threshold, compacts,
/// then sweeps small components. Vertex positions are never changed.
/// ConfigError when threshold <= 1 or the fraction is outside [0, 1];
/// Error when nothing survives.
DenoiseResult denoise_mesh(const TriangleMesh& mesh, const LofModel& model, const DenoiseOptions& options = {});

/// Keeps only the listed faces and the vertices they use, preserving order.
TriangleMesh compact_faces(const TriangleMesh& mesh, const std::vector<int>& faces);

/// Face count of each vertex-connected component, in order of first face.
std::vector<std::size_t> component_sizes(const TriangleMesh& mesh);

/// Fraction of `directions` (quasi-uniform) along which a ray from `origin`
/// crosses the mesh at most once.
double single_layer_fraction(const TriangleMesh& mesh, const Vec3& origin, int directions = 256);

}  // namespace ggs
