// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/lof_denoise.hpp"

#include "ggs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ggs {

namespace {

double lrd_from(double reach_sum, std::size_t count) {
    const double mean = reach_sum / static_cast<double>(count);
    return mean > 0.0 ? std::min(1.0 / mean, kMaxLrd) : kMaxLrd;
}

}  // namespace

LofModel LofModel::fit(const std::vector<Vec3>& reference, int k) {
    if (k < 1) throw InvalidInput("LOF needs k >= 1");
    if (reference.size() <= static_cast<std::size_t>(k)) {
        throw InvalidInput("LOF needs more reference points (" + std::to_string(reference.size()) + ") than k (" +
                           std::to_string(k) + ")");
    }
    LofModel m;
    m.k_ = k;
    m.index_ = std::make_shared<const SpatialIndex>(reference);
    const std::size_t n = reference.size();
    m.k_distance_.resize(n);
    std::vector<std::vector<Neighbor>> hoods(n);
    parallel_for(n, [&](std::size_t i) {
        hoods[i] = m.neighborhood(reference[i], static_cast<int>(i));
        m.k_distance_[i] = std::sqrt(hoods[i][static_cast<std::size_t>(k) - 1].squared_distance);
    });
    m.lrd_.resize(n);
    parallel_for(n, [&](std::size_t i) {
        double sum = 0.0;
        for (const auto& b : hoods[i]) sum += std::max(m.k_distance_[static_cast<std::size_t>(b.index)], b.distance());
        m.lrd_[i] = lrd_from(sum, hoods[i].size());
    });
    return m;
}

std::vector<Neighbor> LofModel::neighborhood(const Vec3& q, int exclude) const {
    const auto nn = index_->knn(q, k_, exclude);
    return index_->radius(q, nn.back().squared_distance, exclude);
}

double LofModel::lof_of(const std::vector<Neighbor>& nb) const {
    double reach = 0.0, density = 0.0;
    for (const auto& b : nb) {
        const auto j = static_cast<std::size_t>(b.index);
        reach += std::max(k_distance_[j], b.distance());
        density += lrd_[j];
    }
    const double own = lrd_from(reach, nb.size());
    return density / static_cast<double>(nb.size()) / own;
}

double LofModel::score(const Vec3& query) const { return lof_of(neighborhood(query, -1)); }

double LofModel::reference_score(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= size()) throw InvalidInput("reference index out of range");
    return lof_of(neighborhood(index_->point(i), i));
}

std::vector<double> LofModel::score_all(const std::vector<Vec3>& queries) const {
    std::vector<double> out(queries.size());
    parallel_for(queries.size(), [&](std::size_t i) { out[i] = score(queries[i]); });
    return out;
}

TriangleMesh compact_faces(const TriangleMesh& mesh, const std::vector<int>& faces) {
    std::vector<int> remap(mesh.vertices.size(), -1);
    TriangleMesh out;
    for (int f : faces) {
        Face nf{};
        for (int c = 0; c < 3; ++c) {
            const int v = mesh.faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)];
            nf[static_cast<std::size_t>(c)] = v;
            remap[static_cast<std::size_t>(v)] = 0;
        }
        out.faces.push_back(nf);
    }
    for (std::size_t v = 0; v < remap.size(); ++v) {
        if (remap[v] < 0) continue;
        remap[v] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[v]);
    }
    for (auto& f : out.faces)
        for (int& v : f) v = remap[static_cast<std::size_t>(v)];
    return out;
}

namespace {

// Component label per face (vertex connectivity), labels in order of first face.
std::vector<int> face_components(const TriangleMesh& mesh, std::size_t& count) {
    std::vector<int> parent(mesh.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& f : mesh.faces) {
        const int a = find(f[0]);
        for (int c = 1; c < 3; ++c) {
            const int b = find(f[static_cast<std::size_t>(c)]);
            if (a != b) parent[static_cast<std::size_t>(b)] = a;
        }
    }
    std::vector<int> label_of_root(mesh.vertices.size(), -1);
    std::vector<int> labels(mesh.faces.size());
    count = 0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const int r = find(mesh.faces[f][0]);
        if (label_of_root[static_cast<std::size_t>(r)] < 0) label_of_root[static_cast<std::size_t>(r)] = static_cast<int>(count++);
        labels[f] = label_of_root[static_cast<std::size_t>(r)];
    }
    return labels;
}

}  // namespace

std::vector<std::size_t> component_sizes(const TriangleMesh& mesh) {
    std::size_t count = 0;
    const auto labels = face_components(mesh, count);
    std::vector<std::size_t> sizes(count, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

DenoiseResult denoise_mesh(const TriangleMesh& mesh, const LofModel& model, const DenoiseOptions& options) {
    if (!(options.threshold > 1.0)) throw ConfigError("LOF threshold must be greater than 1");
    if (!(options.min_component_fraction >= 0.0 && options.min_component_fraction <= 1.0)) {
        throw ConfigError("minimum component fraction must lie in [0, 1]");
    }
    mesh.validate();
    DenoiseResult result;
    result.vertex_scores = model.score_all(mesh.vertices);
    std::vector<char> outlier(mesh.vertices.size(), 0);
    for (std::size_t v = 0; v < outlier.size(); ++v) {
        outlier[v] = result.vertex_scores[v] > options.threshold;
        result.stats.outlier_vertices += static_cast<std::size_t>(outlier[v]);
    }

    std::vector<int> kept;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& t = mesh.faces[f];
        if (!outlier[static_cast<std::size_t>(t[0])] && !outlier[static_cast<std::size_t>(t[1])] &&
            !outlier[static_cast<std::size_t>(t[2])]) {
            kept.push_back(static_cast<int>(f));
        }
    }
    result.stats.faces_removed_lof = mesh.faces.size() - kept.size();
    if (kept.empty()) {
        throw Error("LOF removed every face; raise the LOF threshold (currently " + std::to_string(options.threshold) +
                    ")");
    }

    const TriangleMesh stage = compact_faces(mesh, kept);
    std::size_t count = 0;
    const auto labels = face_components(stage, count);
    std::vector<std::size_t> sizes(count, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    const double largest = static_cast<double>(*std::max_element(sizes.begin(), sizes.end()));
    const double min_faces = options.min_component_fraction * largest;
    std::vector<int> final_faces;
    std::vector<int> final_stage_faces;
    std::size_t survivors = 0;
    for (std::size_t c = 0; c < count; ++c) survivors += static_cast<double>(sizes[c]) >= min_faces ? 1 : 0;
    for (std::size_t f = 0; f < labels.size(); ++f) {
        if (static_cast<double>(sizes[static_cast<std::size_t>(labels[f])]) < min_faces) continue;
        final_stage_faces.push_back(static_cast<int>(f));
        final_faces.push_back(kept[f]);
    }
    result.stats.components_before = count;
    result.stats.components_after = survivors;
    result.stats.faces_removed_components = kept.size() - final_faces.size();
    result.mesh = compact_faces(stage, final_stage_faces);
    result.kept_faces = std::move(final_faces);
    return result;
}

double single_layer_fraction(const TriangleMesh& mesh, const Vec3& origin, int directions) {
    if (directions < 1) throw InvalidInput("need at least one direction");
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<int> crossings(static_cast<std::size_t>(directions), 0);
    parallel_for(static_cast<std::size_t>(directions), [&](std::size_t d) {
        const double z = 1.0 - (2.0 * static_cast<double>(d) + 1.0) / directions;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(d);
        const Vec3 dir(r * std::cos(phi), r * std::sin(phi), z);
        int hits = 0;
        for (const auto& f : mesh.faces) {
            // Moller-Trumbore.
            const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
            const Vec3 e1 = mesh.vertices[static_cast<std::size_t>(f[1])] - a;
            const Vec3 e2 = mesh.vertices[static_cast<std::size_t>(f[2])] - a;
            const Vec3 p = dir.cross(e2);
            const double det = e1.dot(p);
            if (std::abs(det) < 1e-14) continue;
            const Vec3 s = origin - a;
            const double u = s.dot(p) / det;
            if (u < 0.0 || u > 1.0) continue;
            const Vec3 q = s.cross(e1);
            const double v = dir.dot(q) / det;
            if (v < 0.0 || u + v > 1.0) continue;
            if (e2.dot(q) / det > 0.0) ++hits;
        }
        crossings[d] = hits;
    });
    const auto single = std::count_if(crossings.begin(), crossings.end(), [](int h) { return h <= 1; });
    return static_cast<double>(single) / directions;
}

}  // namespace ggs
