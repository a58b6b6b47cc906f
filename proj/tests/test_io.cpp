// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/io.hpp"
#include "ggs/regularizers.hpp"
#include "ggs/synthetic.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace ggs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ggs_test_io";
    fs::create_directories(dir);
    return dir / name;
}

float f32(double v) { return static_cast<float>(v); }

}  // namespace

TEST_CASE("Gaussian checkpoint round-trips at float precision and keeps order") {
    std::mt19937_64 rng(1);
    GaussianCloud cloud;
    for (int i = 0; i < 50; ++i) cloud.primitives.push_back(ggs::testing::random_primitive(rng));
    const auto path = scratch("ckpt.ply");
    io::write_gaussians(path, cloud);
    const GaussianCloud back = io::read_gaussians(path);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            CHECK(back[i].position[k] == f32(cloud[i].position[k]));
            CHECK(back[i].log_scale[k] == f32(cloud[i].log_scale[k]));
            CHECK(back[i].color[k] == f32(cloud[i].color[k]));
        }
        for (int k = 0; k < 4; ++k) CHECK(back[i].rotation[k] == f32(cloud[i].rotation[k]));
        CHECK(back[i].opacity_logit == f32(cloud[i].opacity_logit));
    }
    // A second write of the loaded cloud is byte-identical (float fixed point).
    const auto path2 = scratch("ckpt2.ply");
    io::write_gaussians(path2, back);
    CHECK(io::read_gaussians(path2) == back);
}

TEST_CASE("point cloud PLY round-trip keeps unit normals") {
    const DensePointCloud cloud = synth::fibonacci_sphere(300, {1, 2, 3}, 0.5);
    const auto path = scratch("cloud.ply");
    io::write_point_cloud(path, cloud);
    const DensePointCloud back = io::read_point_cloud(path);
    REQUIRE(back.size() == cloud.size());
    CHECK_NOTHROW(back.validate(1e-6));
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK((back.positions[i] - cloud.positions[i]).norm() < 1e-6);
    CHECK(io::read_points(path).size() == 300);
}

TEST_CASE("ascii PLY with extra properties and quads") {
    const auto path = scratch("ascii.ply");
    {
        std::ofstream out(path);
        out << "ply\nformat ascii 1.0\ncomment hand written\n"
               "element vertex 4\nproperty double x\nproperty double y\nproperty double z\nproperty uchar red\n"
               "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
               "0 0 0 255\n1 0 0 0\n1 1 0 0\n0 1 0 0\n4 0 1 2 3\n";
    }
    const TriangleMesh mesh = io::read_mesh(path);
    CHECK(mesh.vertices.size() == 4);
    REQUIRE(mesh.faces.size() == 2);
    CHECK(mesh.faces[1] == Face{0, 2, 3});
    CHECK_THROWS_AS(io::read_point_cloud(path), IoError);
}

TEST_CASE("mesh OBJ and PLY round-trips") {
    const TriangleMesh mesh = synth::icosphere(2, Vec3::Zero(), 1.0);
    for (const char* name : {"m.obj", "m.ply"}) {
        const auto path = scratch(name);
        io::write_mesh(path, mesh);
        const TriangleMesh back = io::read_mesh(path);
        CHECK(back.faces == mesh.faces);
        REQUIRE(back.vertices.size() == mesh.vertices.size());
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
            CHECK((back.vertices[i] - mesh.vertices[i]).norm() < 1e-6);
    }
    CHECK_THROWS_AS(io::write_mesh(scratch("m.stl"), mesh), IoError);
}

TEST_CASE("OBJ faces with texture and normal indices") {
    const auto path = scratch("slashes.obj");
    {
        std::ofstream out(path);
        out << "# comment\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1/1/1 2//1 -1\n";
    }
    const TriangleMesh mesh = io::read_obj(path);
    REQUIRE(mesh.faces.size() == 1);
    CHECK(mesh.faces[0] == Face{0, 1, 2});
}

TEST_CASE("PNG round-trip quantizes to 8 bits") {
    Image img(7, 5, 3);
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<double>(i % 256) / 255.0;
    const auto path = scratch("img.png");
    io::write_png(path, img);
    const Image back = io::read_png(path);
    CHECK(back == img);

    Image gray(4, 3, 1, 0.5);
    io::write_png(scratch("gray.png"), gray);
    const Image gback = io::read_png(scratch("gray.png"));
    CHECK(gback.channels == 1);
    CHECK(std::abs(gback.data[0] - 0.5) <= 0.5 / 255.0);
    CHECK_THROWS_AS(io::read_png(scratch("missing.png")), IoError);
}

TEST_CASE("PFM round-trip is exact for float values and stored bottom-up") {
    Image img(3, 2, 1);
    img.data = {1, 2, 3, 4, 5, 6};
    const auto path = scratch("d.pfm");
    io::write_pfm(path, img);
    CHECK(io::read_pfm(path) == img);
    // First stored scanline is the bottom image row.
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int w, h;
    double scale;
    in >> magic >> w >> h >> scale;
    in.get();
    float first;
    in.read(reinterpret_cast<char*>(&first), 4);
    CHECK(magic == "Pf");
    CHECK(scale < 0);
    CHECK(first == 4.0f);
}

TEST_CASE("camera file round-trip and validation") {
    std::vector<io::CameraEntry> cams;
    for (const auto& c : synth::ring_cameras(5, 3.0, 1.0, Vec3::Zero(), 64, 48, 70.0)) {
        cams.push_back({static_cast<int>(cams.size()), c});
    }
    const auto path = scratch("cams.txt");
    io::write_cameras(path, cams);
    const auto back = io::read_cameras(path);
    REQUIRE(back.size() == cams.size());
    for (std::size_t i = 0; i < cams.size(); ++i) {
        CHECK(back[i].id == cams[i].id);
        CHECK((back[i].camera.rotation - cams[i].camera.rotation).norm() < 1e-15);
        CHECK(back[i].camera.translation == cams[i].camera.translation);
        CHECK(back[i].camera.width == 64);
    }
    {
        std::ofstream out(scratch("bad_cams.txt"));
        out << "0 100 100 32 24 1 0 0 0 0 0 0 64\n";
    }
    CHECK_THROWS_AS(io::read_cameras(scratch("bad_cams.txt")), IoError);
    {
        std::ofstream out(scratch("bad_intr.txt"));
        out << "0 100 100 99 24 1 0 0 0 0 0 0 64 48\n";
    }
    CHECK_THROWS_AS(io::read_cameras(scratch("bad_intr.txt")), IoError);
    try {
        io::read_cameras(scratch("nope.txt"));
        FAIL("expected throw");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("nope.txt") != std::string::npos);
    }
}

TEST_CASE("synthetic: ray intersections against closed forms") {
    const auto sphere = synth::Shape::sphere(Vec3::Zero(), 1.0);
    auto hit = synth::intersect(sphere, {0, 0, -3}, {0, 0, 1});
    REQUIRE(hit);
    CHECK(hit->t == doctest::Approx(2.0));
    CHECK(hit->normal.isApprox(Vec3{0, 0, -1}));
    CHECK_FALSE(synth::intersect(sphere, {0, 2, -3}, {0, 0, 1}));

    const auto tube = synth::Shape::tube(Vec3::Zero(), 0.5, 1.0);
    hit = synth::intersect(tube, {-2, 0, 0}, {1, 0, 0});
    REQUIRE(hit);
    CHECK(hit->t == doctest::Approx(1.5));
    // Looking down the open end: no cap, the ray passes through.
    CHECK_FALSE(synth::intersect(tube, {0, 0, 5}, {0, 0, -1}));
    // Grazing through the opening hits the far inner wall.
    hit = synth::intersect(tube, {0, 0, 3}, Vec3{0.2, 0, -1}.normalized());
    REQUIRE(hit);
    CHECK(std::abs(hit->point.x() - 0.5) < 1e-12);
    CHECK(hit->normal.x() < 0);
    CHECK(tube.distance({0, 0, 0}) == 0.5);
    CHECK(tube.distance({0.5, 0, 1.5}) == doctest::Approx(0.5));
}

TEST_CASE("synthetic: look_at centers the target and keeps +z forward") {
    const CameraModel cam = synth::look_at({3, -2, 1}, {0.5, 0.5, 0.2}, Vec3::UnitZ(), 64, 48, 60);
    const Vec3 pc = cam.to_camera({0.5, 0.5, 0.2});
    CHECK(pc.z() > 0);
    CHECK(cam.project_camera(pc).isApprox(Vec2{32, 24}, 1e-12));
    // World up maps to image up (negative y).
    CHECK(cam.to_camera(Vec3{0.5, 0.5, 1.2}).y() < pc.y());
    CHECK((cam.center() - Vec3{3, -2, 1}).norm() < 1e-12);
}

TEST_CASE("synthetic: plane scene depth is exact and the texture varies") {
    synth::SceneOptions opt;
    opt.views = 3;
    opt.width = 32;
    opt.height = 24;
    const auto scene = synth::make_scene("plane", opt);
    REQUIRE(scene.images.size() == 3);
    for (double d : scene.depths[0].depth) CHECK(d == doctest::Approx(2.0).epsilon(1e-12));
    double lo = 1, hi = 0;
    for (double v : scene.images[0].data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo > 0.4);
    CHECK_THROWS_AS(synth::make_scene("torus", opt), InvalidInput);
}

TEST_CASE("synthetic: sampled clouds lie on their surfaces") {
    const auto s = synth::fibonacci_sphere(500, {1, 0, 0}, 2.0);
    CHECK_NOTHROW(s.validate());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs((s.positions[i] - Vec3{1, 0, 0}).norm() - 2.0) < 1e-12);
        CHECK(s.normals[i].dot(s.positions[i] - Vec3{1, 0, 0}) > 0);
    }
    const auto t = synth::tube_cloud(20, 5, Vec3::Zero(), 0.6, 0.5);
    CHECK(t.size() == 100);
    const auto tube = synth::Shape::tube(Vec3::Zero(), 0.6, 0.5);
    for (const auto& p : t.positions) CHECK(tube.distance(p) < 1e-12);
    const auto g = synth::disk_gaussians(t, 0.05, 0.001, 0.9);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(std::abs(disk_normal(g[i]).dot(t.normals[i])) - 1.0) < 1e-12);
    }
}
