// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/guidance.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace ggs;
using ggs::testing::random_vec3;

namespace {

// Linear scan in index order with a strict comparison: the first of several
// equidistant points wins.
Neighbor brute_nearest(const std::vector<Vec3>& pts, const Vec3& q) {
    Neighbor best;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3 d = q - pts[i];
        const double d2 = d.x() * d.x() + d.y() * d.y() + d.z() * d.z();
        if (d2 < best.squared_distance) {
            best = {static_cast<int>(i), d2};
        }
    }
    return best;
}

DensePointCloud cloud_from(std::vector<Vec3> pts) {
    DensePointCloud c;
    c.normals.assign(pts.size(), Vec3::UnitZ());
    c.positions = std::move(pts);
    return c;
}

}  // namespace

TEST_CASE("build_index rejects an empty cloud") {
    CHECK_THROWS_AS(build_index(DensePointCloud{}), InvalidInput);
}

TEST_CASE("singleton cloud answers every query with its only point") {
    const auto index = build_index(cloud_from({Vec3{1, 2, 3}}));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        CHECK(nearest(index, random_vec3(rng, -5, 5)).first == 0);
    }
}

TEST_CASE("nearest: Euclidean distance examples") {
    const auto index = build_index(cloud_from({Vec3{3, 4, 0}}));
    CHECK(nearest(index, Vec3::Zero()).second == 5.0);
    CHECK(nearest(index, Vec3{3, 4, 0}).second == 0.0);

    const auto two = build_index(cloud_from({Vec3::Zero(), Vec3{1, 0, 0}}));
    const auto [idx, dist] = nearest(two, Vec3{0.9, 0, 0});
    CHECK(idx == 1);
    CHECK(dist == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("duplicates: exact match gives distance 0 and the lowest index") {
    const auto index = build_index(cloud_from({Vec3{1, 1, 1}, Vec3{0, 0, 0}, Vec3{1, 1, 1}, Vec3{0, 0, 0}}));
    const auto [idx, dist] = nearest(index, Vec3{1, 1, 1});
    CHECK(idx == 0);
    CHECK(dist == 0.0);
    CHECK(nearest(index, Vec3{0, 0, 0}).first == 1);
}

TEST_CASE("nearest agrees with a linear scan on 10k random points") {
    std::mt19937_64 rng(42);
    std::vector<Vec3> pts(10000);
    for (auto& p : pts) p = random_vec3(rng, -1, 1);
    const SpatialIndex index(pts);
    for (int i = 0; i < 100; ++i) {
        const Vec3 q = random_vec3(rng, -1.2, 1.2);
        const Neighbor expected = brute_nearest(pts, q);
        const Neighbor got = index.nearest(q);
        CHECK(got.index == expected.index);
        CHECK(got.squared_distance == expected.squared_distance);
    }
}

TEST_CASE("ties on a lattice resolve to the lowest index, like the linear scan") {
    std::vector<Vec3> pts;
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            for (int z = 0; z < 6; ++z) pts.emplace_back(x, y, z);
    // Shuffle so index order differs from spatial order.
    std::mt19937_64 rng(5);
    std::shuffle(pts.begin(), pts.end(), rng);
    const SpatialIndex index(pts, 2);
    for (int i = 0; i < 300; ++i) {
        // Half-integer queries sit equidistant from several lattice points.
        const Vec3 q{0.5 * std::uniform_int_distribution<int>(0, 10)(rng),
                     0.5 * std::uniform_int_distribution<int>(0, 10)(rng),
                     0.5 * std::uniform_int_distribution<int>(0, 10)(rng)};
        CHECK(index.nearest(q).index == brute_nearest(pts, q).index);
    }
}

TEST_CASE("knn and radius agree with sorted brute force") {
    std::mt19937_64 rng(8);
    std::vector<Vec3> pts(2000);
    for (auto& p : pts) p = random_vec3(rng, 0, 1);
    const SpatialIndex index(pts);
    for (int i = 0; i < 50; ++i) {
        const Vec3 q = random_vec3(rng, 0, 1);
        std::vector<Neighbor> all;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (static_cast<int>(j) == i) continue;
            all.push_back({static_cast<int>(j), squared_distance(q, pts[j])});
        }
        std::sort(all.begin(), all.end());
        const auto knn = index.knn(q, 12, i);
        REQUIRE(knn.size() == 12);
        for (int k = 0; k < 12; ++k) CHECK(knn[static_cast<std::size_t>(k)] == all[static_cast<std::size_t>(k)]);

        const double r2 = all[30].squared_distance;
        const auto within = index.radius(q, r2, i);
        std::size_t expected = 0;
        while (expected < all.size() && all[expected].squared_distance <= r2) ++expected;
        CHECK(within.size() == expected);
    }
}

TEST_CASE("nearest never exceeds the distance to sampled cloud members") {
    std::mt19937_64 rng(13);
    std::vector<Vec3> pts(5000);
    for (auto& p : pts) p = random_vec3(rng, -2, 2);
    const SpatialIndex index(pts);
    for (int i = 0; i < 50; ++i) {
        const Vec3 q = random_vec3(rng, -2, 2);
        const double d = index.nearest(q).distance();
        for (int s = 0; s < 100; ++s) {
            const auto j = std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng);
            CHECK(d <= (q - pts[j]).norm());
        }
    }
}

TEST_CASE("snap_gaussians: exact membership, pairing oracle, idempotence") {
    std::mt19937_64 rng(21);
    DensePointCloud cloud;
    for (int i = 0; i < 3000; ++i) {
        cloud.positions.push_back(random_vec3(rng, -1, 1));
        cloud.normals.push_back(ggs::testing::random_unit(rng));
    }
    const auto index = build_index(cloud);
    GaussianCloud g;
    for (int i = 0; i < 100; ++i) g.primitives.push_back(ggs::testing::random_primitive(rng));

    const auto [snapped, pairing] = snap_gaussians(g, index);
    REQUIRE(pairing.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Neighbor expected = brute_nearest(cloud.positions, g[i].position);
        CHECK(pairing.point_index[i] == expected.index);
        CHECK(pairing.distance[i] == doctest::Approx((g[i].position - cloud.positions[static_cast<std::size_t>(expected.index)]).norm()).epsilon(1e-15));
        CHECK(snapped[i].position == cloud.positions[static_cast<std::size_t>(pairing.point_index[i])]);
        CHECK(snapped[i].rotation == g[i].rotation);
        CHECK(snapped[i].log_scale == g[i].log_scale);
        CHECK(snapped[i].opacity_logit == g[i].opacity_logit);
        CHECK(snapped[i].color == g[i].color);
    }
    const auto [twice, pairing2] = snap_gaussians(snapped, index);
    CHECK(twice == snapped);
    for (double d : pairing2.distance) CHECK(d == 0.0);
}

TEST_CASE("snap_gaussians: Gaussian on a cloud point is a fixed point; blend interpolates") {
    const DensePointCloud cloud = cloud_from({Vec3{0, 0, 0}, Vec3{2, 0, 0}});
    const auto index = build_index(cloud);
    GaussianCloud g;
    g.primitives.resize(2);
    g[0].position = {2, 0, 0};
    g[1].position = {0.5, 0, 0};
    auto [snapped, pairing] = snap_gaussians(g, index);
    CHECK(snapped[0] == g[0]);
    auto [half, p2] = snap_gaussians(g, index, 0.5);
    CHECK(half[1].position.isApprox(Vec3{0.25, 0, 0}));
    CHECK_THROWS_AS(snap_gaussians(g, index, 1.5), InvalidInput);
}

TEST_CASE("paired_normals: constant normals, order equivariance, sphere fixture") {
    std::mt19937_64 rng(33);
    DensePointCloud sphere;
    for (int i = 0; i < 4000; ++i) {
        const Vec3 u = ggs::testing::random_unit(rng);
        sphere.positions.push_back(2.0 * u);
        sphere.normals.push_back(u);
    }
    const auto index = build_index(sphere);
    GaussianCloud g;
    for (int i = 0; i < 200; ++i) {
        GaussianPrimitive p;
        p.position = ggs::testing::random_unit(rng) * std::uniform_real_distribution<double>(1.8, 2.2)(rng);
        g.primitives.push_back(p);
    }
    const auto pairing = pair_gaussians(g, index);
    const auto normals = paired_normals(pairing, sphere);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 q = sphere.positions[static_cast<std::size_t>(pairing.point_index[i])];
        CHECK((normals[i] - q.normalized()).norm() < 1e-6);
    }

    // Reversing the Gaussian order reverses the output.
    GaussianCloud reversed = g;
    std::reverse(reversed.primitives.begin(), reversed.primitives.end());
    const auto rn = paired_normals(pair_gaussians(reversed, index), sphere);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(rn[i] == normals[g.size() - 1 - i]);

    DensePointCloud flat = sphere;
    std::fill(flat.normals.begin(), flat.normals.end(), Vec3::UnitZ());
    for (const auto& n : paired_normals(pairing, flat)) CHECK(n == Vec3::UnitZ());
}
