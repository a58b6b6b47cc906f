// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/io.hpp"
#include "ggs/synthetic.hpp"
#include "ggs/trainer.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

using namespace ggs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ggs_test_trainer";
    fs::create_directories(dir);
    return dir / name;
}

struct SmallScene {
    synth::Scene scene;
    std::vector<TrainView> views;
};

const SmallScene& small_sphere() {
    static const SmallScene s = [] {
        synth::SceneOptions opt;
        opt.views = 8;
        opt.width = 32;
        opt.height = 32;
        opt.cloud_points = 1200;
        SmallScene out;
        out.scene = synth::make_scene("sphere", opt);
        for (std::size_t i = 0; i < out.scene.cameras.size(); ++i)
            out.views.push_back({out.scene.cameras[i], out.scene.images[i]});
        return out;
    }();
    return s;
}

double mean_min_scale(const GaussianCloud& g) { return mean_loss_thin(g); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("init_from_cloud: full cloud keeps exact positions and defaults") {
    const auto cloud = synth::fibonacci_sphere(200, Vec3::Zero(), 1.0);
    const auto g = init_from_cloud(cloud, 200);
    REQUIRE(g.size() == 200);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g[i].position == cloud.positions[i]);
        CHECK(g[i].rotation == Vec4(1, 0, 0, 0));
        CHECK(g[i].opacity() == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(g[i].color == Vec3::Constant(0.5));
        CHECK(g[i].log_scale[0] == g[i].log_scale[1]);
    }
    // Oversized requests fall back to the full cloud.
    CHECK(init_from_cloud(cloud, 5000).size() == 200);
    CHECK_THROWS_AS(init_from_cloud(DensePointCloud{}, 3), InvalidInput);
}

TEST_CASE("init_from_cloud: scale is the mean distance to the three nearest samples") {
    DensePointCloud c;
    for (double x : {0.0, 1.0, 3.0, 6.0, 10.0}) {
        c.positions.push_back({x, 0, 0});
        c.normals.push_back(Vec3::UnitZ());
    }
    const auto g = init_from_cloud(c, 0);
    CHECK(g[0].scales()[0] == doctest::Approx((1.0 + 3.0 + 6.0) / 3.0));
    CHECK(g[2].scales()[0] == doctest::Approx((2.0 + 3.0 + 3.0) / 3.0));
}

TEST_CASE("init_from_cloud: subsample is a seeded subset in cloud order") {
    const auto cloud = synth::fibonacci_sphere(500, Vec3::Zero(), 1.0);
    const auto a = init_from_cloud(cloud, 100, 42);
    const auto b = init_from_cloud(cloud, 100, 42);
    const auto c = init_from_cloud(cloud, 100, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    std::set<std::size_t> seen;
    int last = -1;
    for (const auto& p : a.primitives) {
        int found = -1;
        for (std::size_t i = 0; i < cloud.size(); ++i)
            if (cloud.positions[i] == p.position) found = static_cast<int>(i);
        REQUIRE(found >= 0);
        CHECK(found > last);
        last = found;
    }
}

TEST_CASE("init_from_cloud: degenerate clouds get the positive floor") {
    DensePointCloud two;
    two.positions = {Vec3::Zero(), Vec3::Zero()};
    two.normals = {Vec3::UnitZ(), Vec3::UnitZ()};
    for (const auto& g : init_from_cloud(two, 0).primitives) {
        CHECK(g.scales()[0] == doctest::Approx(1e-4));
        CHECK(std::isfinite(g.log_scale[0]));
    }
    DensePointCloud one;
    one.positions = {Vec3::Ones()};
    one.normals = {Vec3::UnitZ()};
    CHECK(init_from_cloud(one, 0)[0].scales()[0] == doctest::Approx(1e-4));
}

TEST_CASE("TrainConfig: defaults, file round-trip and rejection of unknown keys") {
    TrainConfig c;
    CHECK(c.alpha == 100.0);
    CHECK(c.beta == 0.1);
    CHECK(c.effective_snap_stop() == 1600);
    CHECK(c.position_lr(0) == doctest::Approx(1.6e-4));
    CHECK(c.position_lr(c.iterations) == doctest::Approx(1.6e-6));

    c.iterations = 123;
    c.enable_rotate = false;
    c.background = {0.1, 0.2, 0.3};
    c.seed = 9;
    save_train_config(scratch("cfg.txt"), c);
    const TrainConfig back = load_train_config(scratch("cfg.txt"));
    CHECK(back.to_map() == c.to_map());

    {
        std::ofstream out(scratch("bad.txt"));
        out << "# comment\niterations = 10\nlearning_rate = 3\n";
    }
    CHECK_THROWS_AS(load_train_config(scratch("bad.txt")), ConfigError);
    {
        std::ofstream out(scratch("bad2.txt"));
        out << "iterations = ten\n";
    }
    CHECK_THROWS_AS(load_train_config(scratch("bad2.txt")), ConfigError);
    {
        std::ofstream out(scratch("bad3.txt"));
        out << "snap_interval = 0\n";
    }
    CHECK_THROWS_AS(load_train_config(scratch("bad3.txt")), ConfigError);
    CHECK_THROWS_AS(load_train_config(scratch("missing.txt")), ConfigError);
}

TEST_CASE("maybe_snap follows the schedule") {
    const auto cloud = synth::fibonacci_sphere(300, Vec3::Zero(), 1.0);
    const SpatialIndex index(cloud.positions);
    GaussianCloud g = init_from_cloud(cloud, 50, 1);
    for (auto& p : g.primitives) p.position *= 1.1;
    TrainConfig cfg;
    cfg.iterations = 1000;
    cfg.snap_interval = 100;
    cfg.snap_stop = 500;

    TrainState s(g);
    s.iteration = 0;
    CHECK(maybe_snap(s, index, cfg));
    std::set<std::tuple<double, double, double>> members;
    for (const auto& p : cloud.positions) members.insert({p.x(), p.y(), p.z()});
    for (const auto& p : s.gaussians.primitives) CHECK(members.count({p.position.x(), p.position.y(), p.position.z()}) == 1);

    TrainState t(g);
    t.iteration = 150;
    CHECK_FALSE(maybe_snap(t, index, cfg));
    CHECK(t.gaussians == g);
    t.iteration = 500;
    CHECK_FALSE(maybe_snap(t, index, cfg));
    t.iteration = 400;
    cfg.enable_move = false;
    CHECK_FALSE(maybe_snap(t, index, cfg));
    CHECK(t.gaussians == g);
}

TEST_CASE("maybe_prune drops transparent Gaussians together with their moments") {
    GaussianCloud g;
    g.primitives.resize(4);
    g[1].opacity_logit = -10.0;
    TrainState s(g);
    for (std::size_t i = 0; i < 4; ++i) s.first_moment[i][0] = static_cast<double>(i);
    TrainConfig cfg;
    cfg.snap_interval = 10;
    s.iteration = 10;
    CHECK(maybe_prune(s, cfg) == 1);
    CHECK(s.gaussians.size() == 3);
    CHECK(s.first_moment[1][0] == 2.0);
    CHECK_NOTHROW(s.check_shapes());
    s.iteration = 15;
    s.gaussians[0].opacity_logit = -10.0;
    CHECK(maybe_prune(s, cfg) == 0);
}

TEST_CASE("train_step: zero photometric error with every toggle off leaves parameters unchanged") {
    const auto& sc = small_sphere();
    GaussianCloud g = init_from_cloud(sc.scene.cloud, 200, 3);
    for (auto& p : g.primitives) p.opacity_logit = 1.0;
    std::vector<TrainView> views;
    for (int i = 0; i < 3; ++i) {
        const auto& cam = sc.scene.cameras[static_cast<std::size_t>(i)];
        views.push_back({cam, render(g, cam).frame.color});
    }
    TrainConfig cfg;
    cfg.enable_move = cfg.enable_flatten = cfg.enable_rotate = false;
    TrainState s(g);
    for (int i = 0; i < 6; ++i) train_step(s, views, cfg);
    CHECK(s.gaussians == g);
    CHECK(s.history.size() == 6);
}

TEST_CASE("train_step: a disabled term equals a zero weight exactly") {
    const auto& sc = small_sphere();
    const SpatialIndex index(sc.scene.cloud.positions);
    const Guidance guidance{&sc.scene.cloud, &index};
    const GaussianCloud g = init_from_cloud(sc.scene.cloud, 150, 5);

    auto run = [&](TrainConfig cfg) {
        TrainState s(g);
        for (int i = 0; i < 10; ++i) train_step(s, sc.views, cfg, guidance);
        return s.gaussians;
    };
    TrainConfig off;
    off.enable_flatten = false;
    TrainConfig zero;
    zero.alpha = 0.0;
    CHECK(run(off) == run(zero));

    off = {};
    off.enable_rotate = false;
    zero = {};
    zero.beta = 0.0;
    CHECK(run(off) == run(zero));
}

TEST_CASE("train_step: non-finite loss names the offending term") {
    const auto& sc = small_sphere();
    GaussianCloud g = init_from_cloud(sc.scene.cloud, 50, 1);
    g[0].color[0] = std::nan("");
    g[0].opacity_logit = 5.0;
    TrainConfig cfg;
    cfg.enable_move = cfg.enable_rotate = false;
    TrainState s(g);
    try {
        // The NaN Gaussian must be visible in at least one of the views.
        for (std::size_t i = 0; i < sc.views.size(); ++i) train_step(s, sc.views, cfg);
        FAIL("expected a non-finite loss error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("l_rgb") != std::string::npos);
    }

    GaussianCloud h = init_from_cloud(sc.scene.cloud, 50, 1);
    h[3].log_scale = Vec3::Constant(std::numeric_limits<double>::infinity());
    TrainState t(h);
    TrainConfig flat;
    flat.enable_move = flat.enable_rotate = false;
    // Infinite scales make the splat cover everything: l_rgb stays finite
    // only if it is culled, so either term may be the first to fail.
    CHECK_THROWS_AS(train_step(t, sc.views, flat), Error);
}

TEST_CASE("train_step needs a cloud for the rotation term") {
    const auto& sc = small_sphere();
    TrainState s(init_from_cloud(sc.scene.cloud, 20, 1));
    CHECK_THROWS_AS(train_step(s, sc.views, TrainConfig{}), ConfigError);
    CHECK_THROWS_AS(train_step(s, {}, TrainConfig{}), InvalidInput);
}

TEST_CASE("flattening alone shrinks the mean minimum scale over 200 steps") {
    const auto& sc = small_sphere();
    const GaussianCloud g = init_from_cloud(sc.scene.cloud, 300, 2);
    TrainConfig cfg;
    cfg.iterations = 200;
    cfg.enable_move = cfg.enable_rotate = false;
    const auto r = run_training(cfg, sc.views, nullptr, &g);
    CHECK(mean_min_scale(r.gaussians) < mean_min_scale(g));
    CHECK(median_min_scale(r.gaussians) < median_min_scale(g));
}

TEST_CASE("rotation alone aligns disk normals on the sphere within 500 steps") {
    const auto& sc = small_sphere();
    const GaussianCloud g = init_from_cloud(sc.scene.cloud, 300, 2);
    TrainConfig cfg;
    cfg.iterations = 500;
    cfg.enable_move = cfg.enable_flatten = false;
    const auto r = run_training(cfg, sc.views, &sc.scene.cloud, &g);
    const SpatialIndex index(sc.scene.cloud.positions);
    const auto normals = paired_normals(pair_gaussians(r.gaussians, index), sc.scene.cloud);
    const double l = mean_loss_normal(r.gaussians, normals);
    MESSAGE("mean L_normal after 500 rotate-only steps: " << l);
    CHECK(l < 0.01);
}

TEST_CASE("run_training: seeded runs are bitwise identical and log every step") {
    const auto& sc = small_sphere();
    TrainConfig cfg;
    cfg.iterations = 60;
    cfg.snap_interval = 20;
    cfg.subsample = 200;
    cfg.seed = 11;
    const auto a = run_training(cfg, sc.views, &sc.scene.cloud, nullptr,
                                {scratch("a.ply"), scratch("a.csv")});
    const auto b = run_training(cfg, sc.views, &sc.scene.cloud, nullptr,
                                {scratch("b.ply"), scratch("b.csv")});
    CHECK(a.gaussians == b.gaussians);
    CHECK(slurp(scratch("a.ply")) == slurp(scratch("b.ply")));
    CHECK(slurp(scratch("a.csv")) == slurp(scratch("b.csv")));
    CHECK(a.history.size() == 60);
    std::ifstream csv(scratch("a.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "iteration,l_rgb,l_thin,l_normal,total");
    CHECK(io::read_gaussians(scratch("a.ply")).size() == a.gaussians.size());
}

TEST_CASE("run_training: configuration errors") {
    const auto& sc = small_sphere();
    TrainConfig cfg;
    cfg.iterations = 1;
    CHECK_THROWS_AS(run_training(cfg, sc.views, nullptr), ConfigError);
    cfg.enable_move = cfg.enable_rotate = false;
    CHECK_THROWS_AS(run_training(cfg, sc.views, nullptr), ConfigError);
    CHECK_THROWS_AS(run_training(cfg, {}, &sc.scene.cloud), ConfigError);
    cfg.iterations = 0;
    CHECK_THROWS_AS(run_training(cfg, sc.views, &sc.scene.cloud), ConfigError);
}
