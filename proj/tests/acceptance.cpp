// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion.
//
//   ggs_acceptance [--only N[,N...]] [--expect-fail N[,N...]]
//
// Exit status is 0 when the failing set equals the expected-failure set
// (empty by default), so a known, documented failure stays visible in the
// output without breaking the test run, while any change in either
// direction is reported.
#include "ggs/eval_metrics.hpp"
#include "ggs/fastmvs.hpp"
#include "ggs/guidance.hpp"
#include "ggs/lof_denoise.hpp"
#include "ggs/mesh_extract.hpp"
#include "ggs/parallel.hpp"
#include "ggs/pipeline.hpp"
#include "ggs/regularizers.hpp"
#include "ggs/render.hpp"
#include "ggs/synthetic.hpp"
#include "ggs/trainer.hpp"
#include "lof_oracle.hpp"
#include "render_fixtures.hpp"
#include "test_support.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

using namespace ggs;
using namespace ggs::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records a sub-check; the first failing one is marked in the detail.
    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void gradients(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);

    // Regularizers, both weights active.
    double reg_max = 0.0, reg_abs = 0.0;
    int reg_configs = 0;
    while (reg_configs < 50) {
        GaussianCloud g;
        std::vector<Vec3> normals;
        for (int i = 0; i < 4; ++i) {
            g.primitives.push_back(random_primitive(rng));
            normals.push_back(random_unit(rng));
        }
        // The min-scale term has a kink where two scales tie.
        bool near_tie = false;
        for (const auto& p : g.primitives) {
            const Vec3& l = p.log_scale;
            near_tie = near_tie ||
                       std::min({std::abs(l[0] - l[1]), std::abs(l[1] - l[2]), std::abs(l[0] - l[2])}) < 1e-4;
        }
        if (near_tie) continue;
        ++reg_configs;
        const LossWeights w{100.0, 0.1};
        const GradientSet grad = analytic_gradients(g, normals, GradientSet{}, w);
        auto f = [&](const GaussianCloud& c) { return total_loss(0.0, c, normals, w).total; };
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto packed = pack_gradient(grad[i]);
            for (int k = 0; k < kParamsPerPrimitive; ++k) {
                const double fd = central_difference(g, i, k, 1e-6, f);
                reg_max = std::max(reg_max, relative_error(packed[static_cast<std::size_t>(k)], fd, 1e-8));
                reg_abs = std::max(reg_abs, std::abs(packed[static_cast<std::size_t>(k)] - fd));
            }
        }
    }

    // Photometric loss with respect to the rendered image.
    double photo_max = 0.0, photo_abs = 0.0;
    std::uniform_real_distribution<double> u(0, 1);
    for (int config = 0; config < 50; ++config) {
        Image rendered(6, 6, 3), target(6, 6, 3);
        for (auto& v : rendered.data) v = u(rng);
        for (auto& v : target.data) v = u(rng);
        const auto loss = photometric_loss(rendered, target);
        for (std::size_t i = 0; i < rendered.data.size(); ++i) {
            const double h = 1e-6;
            Image p = rendered, m = rendered;
            p.data[i] += h;
            m.data[i] -= h;
            const double fd = (photometric_loss(p, target).value - photometric_loss(m, target).value) / (2 * h);
            photo_max = std::max(photo_max, relative_error(loss.gradient.data[i], fd, 1e-9));
            photo_abs = std::max(photo_abs, std::abs(loss.gradient.data[i] - fd));
        }
    }

    // Full render backward.
    double render_max = 0.0;
    int render_checked = 0;
    for (int config = 0; config < 50; ++config) {
        const auto scene = random_render_scene(rng, 6, 12, 12);
        const auto report = check_render_gradients(scene);
        render_max = std::max(render_max, report.max_relative_error);
        render_checked += report.checked;
    }
    const double secs = seconds_since(t0);
    // Differences below the absolute floor count as zero relative error.
    o.detail << "regularizers 50 configs max rel " << reg_max << " (max abs diff " << reg_abs
             << ", floor 1e-8); photometric 50 configs max rel " << photo_max << " (max abs diff " << photo_abs
             << ", floor 1e-9); render chain 50 scenes (" << render_checked << " params) max rel " << render_max << "; ";
    o.check(reg_max < 1e-5, "regularizer error < 1e-5");
    o.check(photo_max < 1e-3, "photometric error < 1e-3");
    o.check(render_max < 1e-3, "render chain error < 1e-3");
    o.check(secs < 120.0, "runtime < 2 min");
}

void snapping(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    bool members = true, oracle = true, idempotent = true;
    for (int instance = 0; instance < 5; ++instance) {
        DensePointCloud cloud;
        for (int i = 0; i < 10000; ++i) {
            cloud.positions.push_back(random_vec3(rng, -1, 1));
            cloud.normals.push_back(random_unit(rng));
        }
        GaussianCloud g;
        for (int i = 0; i < 100; ++i) g.primitives.push_back(random_primitive(rng));
        const auto index = build_index(cloud);
        const auto [snapped, pairing] = snap_gaussians(g, index);
        for (std::size_t i = 0; i < g.size(); ++i) {
            // O(n m) assignment, lowest index on ties.
            int best = -1;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < cloud.size(); ++j) {
                const double d2 = (g[i].position - cloud.positions[j]).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = static_cast<int>(j);
                }
            }
            oracle = oracle && pairing.point_index[i] == best;
            members = members && snapped[i].position == cloud.positions[static_cast<std::size_t>(best)];
        }
        const auto again = snap_gaussians(snapped, index);
        idempotent = idempotent && again.first == snapped;
    }
    const double secs = seconds_since(t0);
    o.detail << "5 instances of 100 Gaussians x 10k points; ";
    o.check(members, "snapped positions are cloud members");
    o.check(oracle, "pairing equals brute force");
    o.check(idempotent, "idempotence");
    o.check(secs < 30.0, "runtime < 30 s");
}

void lof_oracle(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    double max_err = 0.0;
    std::mt19937_64 rng(303);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t count : {40u, 200u, 500u}) {
        std::vector<Vec3> pts;
        for (std::size_t i = 0; i < count; ++i) {
            const double s = i % 10 == 0 ? 4.0 : 1.0;
            pts.push_back((i % 2 ? Vec3(3, 0, 0) : Vec3::Zero()) + s * Vec3(n(rng), n(rng), n(rng)));
        }
        std::vector<Vec3> queries;
        for (int q = 0; q < 20; ++q) queries.push_back(3.0 * Vec3(n(rng), n(rng), n(rng)));
        for (int k : {3, 5, 10}) {
            const LofModel model = LofModel::fit(pts, k);
            const BruteLof brute(pts, k);
            for (std::size_t i = 0; i < count; ++i) {
                const double ref = brute.lof(pts[i], static_cast<int>(i));
                max_err = std::max(max_err, std::abs(model.reference_score(static_cast<int>(i)) - ref) /
                                                std::max(1.0, std::abs(ref)));
            }
            for (const auto& q : queries) {
                const double ref = brute.lof(q, -1);
                max_err = std::max(max_err, std::abs(model.score(q) - ref) / std::max(1.0, std::abs(ref)));
            }
        }
    }
    std::vector<Vec3> grid;
    for (int z = 0; z < 10; ++z)
        for (int y = 0; y < 10; ++y)
            for (int x = 0; x < 10; ++x) grid.push_back(Vec3(x, y, z));
    const LofModel gm = LofModel::fit(grid, 10);
    double lo = 1e300, hi = -1e300;
    for (int z = 2; z < 8; ++z)
        for (int y = 2; y < 8; ++y)
            for (int x = 2; x < 8; ++x) {
                const double s = gm.reference_score((z * 10 + y) * 10 + x);
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
    const double secs = seconds_since(t0);
    o.detail << "max deviation from brute force " << max_err << " (n 40/200/500, k 3/5/10); grid interior ["
             << lo << ", " << hi << "]; ";
    o.check(max_err <= 1e-9, "oracle match 1e-9");
    o.check(lo >= 0.9 && hi <= 1.1, "grid interior in [0.9, 1.1]");
    o.check(secs < 60.0, "runtime < 1 min");
}

void double_layer(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const synth::DoubleLayer fx = synth::double_layer_fixture();
    const LofModel model = LofModel::fit(fx.cloud, 20);
    const DenoiseResult r = denoise_mesh(fx.mesh, model, DenoiseOptions{});
    std::vector<char> kept(fx.mesh.faces.size(), 0);
    for (int f : r.kept_faces) kept[static_cast<std::size_t>(f)] = 1;
    std::size_t inner = 0, inner_removed = 0, outer = 0, outer_kept = 0;
    for (std::size_t f = 0; f < kept.size(); ++f) {
        if (fx.inner_face[f]) {
            ++inner;
            inner_removed += kept[f] ? 0 : 1;
        } else {
            ++outer;
            outer_kept += kept[f];
        }
    }
    const double removed = static_cast<double>(inner_removed) / static_cast<double>(inner);
    const double retained = static_cast<double>(outer_kept) / static_cast<double>(outer);
    const double secs = seconds_since(t0);
    o.detail << inner << " inner faces, " << 100.0 * removed << "% removed; " << outer << " outer faces, "
             << 100.0 * retained << "% retained (k 20, threshold 1.5); ";
    o.check(inner > 0 && removed >= 0.95, "inner removal >= 95%");
    o.check(retained >= 0.99, "outer retention >= 99%");
    o.check(secs < 120.0, "runtime < 2 min");
}

void open_surfaces(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    // Open tube of disks, seen from above and below so the inside is observed.
    const DensePointCloud tube = synth::tube_cloud(96, 48, Vec3::Zero(), 0.6, 0.6);
    const GaussianCloud tg = synth::disk_gaussians(tube, 0.03, 0.004, 0.99);
    const auto tcams = synth::ring_cameras(16, 3.5, 1.6, Vec3::Zero(), 96, 96, 1.2 * 96, true);
    const ExtractResult te = extract(tg, tcams, ExtractOptions{});
    const DenoiseResult td = denoise_mesh(te.mesh, LofModel::fit(tube, 20), DenoiseOptions{});
    const std::size_t tube_loops = count_boundary_loops(td.mesh);

    // Closed sphere of disks.
    const int count = 3000;
    const DensePointCloud sphere = synth::fibonacci_sphere(count, Vec3::Zero(), 1.0);
    const double spacing = std::sqrt(4.0 * std::acos(-1.0) / count);
    const GaussianCloud sg = synth::disk_gaussians(sphere, 0.6 * spacing, 0.005, 0.99);
    const auto scams = synth::orbit_cameras(24, 4.0, Vec3::Zero(), 96, 96, 1.2 * 96);
    const ExtractResult se = extract(sg, scams, ExtractOptions{});
    const DenoiseResult sd = denoise_mesh(se.mesh, LofModel::fit(sphere, 20), DenoiseOptions{});
    const std::size_t sphere_loops = count_boundary_loops(sd.mesh);
    const double secs = seconds_since(t0);
    o.detail << "tube: " << td.mesh.faces.size() << " faces, " << tube_loops << " boundary loops (voxel "
             << te.volume.voxel_size << "); sphere: " << sd.mesh.faces.size() << " faces, " << sphere_loops
             << " boundary loops (voxel " << se.volume.voxel_size << "); ";
    o.check(tube_loops >= 2, "tube keeps >= 2 boundary loops");
    o.check(!sd.mesh.empty() && sphere_loops == 0, "sphere closed");
    o.check(secs < 300.0, "runtime < 5 min");
}

void regularizer_effects(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    synth::SceneOptions so;
    so.views = 20;
    so.width = 64;
    so.height = 64;
    so.cloud_points = 4000;
    const synth::Scene scene = synth::make_scene("sphere", so);
    std::vector<TrainView> views;
    for (std::size_t i = 0; i < scene.cameras.size(); ++i) views.push_back({scene.cameras[i], scene.images[i]});

    // 2000 Gaussians from the ground-truth cloud, positions jittered so that
    // the movement term has an error to correct.
    GaussianCloud init = init_from_cloud(scene.cloud, 2000, 5);
    std::mt19937_64 rng(606);
    std::normal_distribution<double> jitter(0.0, 0.03);
    for (auto& g : init.primitives) g.position += Vec3(jitter(rng), jitter(rng), jitter(rng));

    auto run = [&](bool move, bool flatten, bool rotate) {
        TrainConfig c;
        c.enable_move = move;
        c.enable_flatten = flatten;
        c.enable_rotate = rotate;
        return run_training(c, views, &scene.cloud, &init);
    };
    auto cd = [&](const GaussianCloud& g) {
        std::vector<Vec3> centers;
        for (const auto& p : g.primitives) centers.push_back(p.position);
        return chamfer_distance(centers, scene.cloud.positions);
    };
    const SpatialIndex index(scene.cloud.positions);
    auto l_normal = [&](const GaussianCloud& g) {
        return mean_loss_normal(g, paired_normals(pair_gaussians(g, index), scene.cloud));
    };

    const TrainResult full = run(true, true, true);
    const TrainResult no_flatten = run(true, false, true);
    const TrainResult no_rotate = run(true, true, false);
    const TrainResult no_move = run(false, true, true);

    const double flat_ratio = median_min_scale(no_flatten.gaussians) / median_min_scale(full.gaussians);
    const double ln_full = l_normal(full.gaussians), ln_off = l_normal(no_rotate.gaussians);
    const double cd_full = cd(full.gaussians), cd_off = cd(no_move.gaussians);
    const double secs = seconds_since(t0);
    o.detail << full.gaussians.size() << " Gaussians, 2000 iterations; median min-scale off/on " << flat_ratio
             << "x; mean L_normal on " << ln_full << " (off " << ln_off << "); CD to GT cloud on " << cd_full
             << " vs off " << cd_off << " (init " << cd(init) << "); ";
    o.check(init.size() <= 2000, "<= 2k Gaussians");
    o.check(flat_ratio >= 5.0, "flattening >= 5x");
    o.check(ln_full < 0.01, "L_normal < 0.01");
    o.check(cd_full < cd_off, "movement lowers CD");
    o.check(secs < 1800.0, "runtime < 30 min");
}

// Ray-cast camera depth through the center of pixel (x, y); 0 on a miss.
double true_depth(const synth::Shape& shape, const CameraModel& cam, int x, int y) {
    const Vec3 dir = cam.world_to_camera_rotation().transpose() * cam.unproject({x + 0.5, y + 0.5}, 1.0);
    const auto hit = synth::intersect(shape, cam.center(), dir.normalized());
    return hit ? cam.to_camera(hit->point).z() : 0.0;
}

double within_step_fraction(const synth::Shape& shape, const std::vector<DepthMap>& maps,
                            const std::vector<CameraModel>& cams, double step) {
    std::size_t valid = 0, good = 0;
    for (std::size_t v = 0; v < maps.size(); ++v)
        for (int y = 0; y < maps[v].height; ++y)
            for (int x = 0; x < maps[v].width; ++x) {
                const double d = maps[v].at(x, y);
                const double t = true_depth(shape, cams[v], x, y);
                if (d <= 0.0 || t <= 0.0) continue;
                ++valid;
                good += std::abs(1.0 / d - 1.0 / t) <= step ? 1 : 0;
            }
    return valid ? static_cast<double>(good) / static_cast<double>(valid) : 0.0;
}

double rms_to_surface(const synth::Shape& shape, const DensePointCloud& cloud) {
    double sq = 0.0;
    for (const auto& p : cloud.positions) sq += std::pow(shape.distance(p), 2);
    return cloud.empty() ? std::numeric_limits<double>::infinity() : std::sqrt(sq / static_cast<double>(cloud.size()));
}

std::vector<MvsView> views_of(const synth::Scene& s) {
    std::vector<MvsView> v;
    for (std::size_t i = 0; i < s.cameras.size(); ++i) v.push_back({static_cast<int>(i), s.cameras[i], s.images[i]});
    return v;
}

void mvs_accuracy(Outcome& o) {
    synth::SceneOptions so;
    so.views = 20;
    so.width = 160;
    so.height = 120;
    so.cloud_points = 100;

    const synth::Scene plane = synth::make_scene("plane", so);
    MvsConfig pc;
    pc.depth_min = 1.0;
    pc.depth_max = 4.0;
    const MvsResult pr = reconstruct(views_of(plane), pc);
    const double pstep = inverse_depth_step(pc.depth_min, pc.depth_max, pc.planes);
    const double plane_frac = within_step_fraction(plane.shape, pr.raw_depths, pr.working_cameras, pstep);
    const double plane_depth = 2.0;
    const double plane_rms = rms_to_surface(plane.shape, pr.cloud);
    const double plane_bound = 2.0 * plane_depth * plane_depth * pstep;

    const synth::Scene sphere = synth::make_scene("sphere", so);
    MvsConfig sc;
    sc.downsample = 2;
    const MvsResult sr = reconstruct(views_of(sphere), sc);
    const double sstep = inverse_depth_step(sr.depth_min, sr.depth_max, sc.planes);
    const double sphere_raw = within_step_fraction(sphere.shape, sr.raw_depths, sr.working_cameras, sstep);
    const double sphere_filtered = within_step_fraction(sphere.shape, sr.filtered_depths, sr.working_cameras, sstep);
    const double nearest = (sphere.cameras[0].center() - sphere.shape.center).norm() - sphere.shape.radius;
    const double sphere_rms = rms_to_surface(sphere.shape, sr.cloud);
    const double sphere_bound = 2.0 * nearest * nearest * sstep;

    // Monotonicity: every stricter setting keeps a subset of the pixels.
    auto maps = sphere.depths;
    std::mt19937_64 rng(707);
    std::normal_distribution<double> n(0.0, 0.01);
    for (auto& m : maps)
        for (double& d : m.depth)
            if (d > 0.0) d *= 1.0 + n(rng);
    auto subset = [](const std::vector<DepthMap>& a, const std::vector<DepthMap>& b) {
        for (std::size_t v = 0; v < a.size(); ++v)
            for (std::size_t i = 0; i < a[v].depth.size(); ++i)
                if (a[v].depth[i] > 0.0 && b[v].depth[i] != a[v].depth[i]) return false;
        return true;
    };
    MvsConfig base;
    const auto one = consistency_filter(maps, sphere.cameras, base);
    bool monotone = subset(one, maps);
    MvsConfig stricter = base;
    stricter.consistency_iterations = 3;
    monotone = monotone && subset(consistency_filter(maps, sphere.cameras, stricter), one);
    stricter = base;
    stricter.min_consistent = 4;
    monotone = monotone && subset(consistency_filter(maps, sphere.cameras, stricter), one);
    stricter = base;
    stricter.depth_tolerance = 0.002;
    monotone = monotone && subset(consistency_filter(maps, sphere.cameras, stricter), one);

    const synth::Scene tube = synth::make_scene("tube", so);
    const auto t0 = std::chrono::steady_clock::now();
    const MvsResult tr = reconstruct(views_of(tube), MvsConfig{});
    const double tube_secs = seconds_since(t0);

    o.detail << "plane within one step " << 100.0 * plane_frac << "%, fused RMS " << plane_rms << " (bound "
             << plane_bound << "); sphere within one step raw " << 100.0 * sphere_raw << "% filtered "
             << 100.0 * sphere_filtered << "%, fused RMS " << sphere_rms << " (bound " << sphere_bound
             << "); 20-view 160x120 run " << tube_secs << " s (" << tr.cloud.size() << " points); ";
    o.check(plane_frac >= 0.9, "plane >= 90% within one step");
    o.check(sphere_raw >= 0.9, "sphere >= 90% within one step");
    o.check(plane_rms <= plane_bound, "plane RMS <= 2 steps");
    o.check(sphere_rms <= sphere_bound, "sphere RMS <= 2 steps");
    o.check(monotone, "filter monotonicity");
    o.check(tube_secs < 120.0, "run < 2 min");
}

void determinism(Outcome& o) {
    const fs::path root = fs::temp_directory_path() / "ggs_acceptance_determinism";
    fs::remove_all(root);
    synth::SceneOptions so;
    so.views = 20;
    so.width = 64;
    so.height = 64;
    const synth::Scene s = synth::make_scene("tube", so);
    write_scene(root / "scene", s.cameras, s.images, &s.mesh, &s.cloud);

    PipelineConfig c;
    c.mvs.downsample = 2;
    c.train.iterations = 500;
    c.train.seed = 9;
    c.eval.seed = 9;
    c.eval.samples = 20000;
    // Second run with a different worker count: results must not depend on it.
    const int threads_before = thread_count();
    std::vector<std::map<std::string, std::string>> digests;
    for (int run = 0; run < 2; ++run) {
        set_thread_count(run == 0 ? 1 : 4);
        const fs::path out = root / ("run" + std::to_string(run));
        const SceneData scene = load_scene(root / "scene");
        std::vector<StageRecord> stages;
        stages.push_back(stage_mvs(scene, c.mvs, out));
        stages.push_back(stage_train(scene, out / artifacts::kDenseCloud, c.train, out));
        stages.push_back(stage_extract(scene, out / artifacts::kCheckpoint, c.extract, out));
        stages.push_back(stage_denoise(out / artifacts::kMesh, out / artifacts::kDenseCloud, c.lof_k, c.denoise, out));
        stages.push_back(stage_eval(scene, out / artifacts::kCheckpoint, out / artifacts::kDenoisedMesh,
                                    *scene.reference_cloud(), c.eval, out));
        std::map<std::string, std::string> d;
        for (const auto& st : stages)
            for (const auto& f : st.outputs) d[fs::path(f.path).filename().string()] = f.sha256;
        digests.push_back(d);
    }
    set_thread_count(threads_before);
    std::size_t differing = 0;
    for (const auto& [name, digest] : digests[0]) differing += digests[1].at(name) == digest ? 0 : 1;
    o.detail << digests[0].size() << " artifacts compared across 1 and 4 worker threads, " << differing
             << " differ; ";
    for (const char* key : {artifacts::kCheckpoint, artifacts::kMesh, artifacts::kDenoisedMesh, artifacts::kReportCsv}) {
        o.check(digests[0].count(key) == 1 && digests[0].at(key) == digests[1].at(key),
                std::string("identical ") + key);
    }
    o.check(differing == 0, "every artifact identical");
}

void metric_identities(Outcome& o) {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Vec3> a, b;
    for (int i = 0; i < 500; ++i) a.push_back({u(rng), u(rng), u(rng)});
    for (int i = 0; i < 400; ++i) b.push_back({u(rng), u(rng), u(rng)});
    const double cd = chamfer_distance(a, b);
    bool scale_ok = true;
    for (double s : {0.25, 2.0, 16.0}) {  // powers of two scale exactly
        std::vector<Vec3> sa, sb;
        for (const auto& p : a) sa.push_back(s * p);
        for (const auto& p : b) sb.push_back(s * p);
        scale_ok = scale_ok && chamfer_distance(sa, sb) == s * cd;
    }
    std::vector<Vec3> sa, sb;
    for (const auto& p : a) sa.push_back(3.3 * p);
    for (const auto& p : b) sb.push_back(3.3 * p);
    const double general_scale = std::abs(chamfer_distance(sa, sb) - 3.3 * cd) / (3.3 * cd);

    const Psnr p = psnr(Image(32, 32, 3, 0.5), Image(32, 32, 3, 0.6));
    Image noise(32, 32, 3);
    std::uniform_real_distribution<double> v(0, 1);
    for (double& x : noise.data) x = v(rng);
    const double s_same = image_ssim(noise, noise);

    o.detail << "CD(A,A) " << chamfer_distance(a, a) << ", |CD(A,B)-CD(B,A)| " << std::abs(cd - chamfer_distance(b, a))
             << ", scale x3.3 rel err " << general_scale << "; PSNR 0.1 offset " << p.db << " dB (|err| "
             << std::abs(p.db - 20.0) << "); SSIM(x,x) " << s_same << "; ";
    o.check(chamfer_distance(a, a) == 0.0, "CD(A,A) = 0");
    o.check(cd == chamfer_distance(b, a), "CD symmetric");
    o.check(scale_ok && general_scale < 1e-12, "CD scale equivariant");
    // 0.5 and 0.6 are not exact in binary; the residual is at rounding level.
    o.check(!p.infinite && std::abs(p.db - 20.0) < 1e-9, "PSNR = 20 dB");
    o.check(std::abs(s_same - 1.0) < 1e-15, "SSIM(identical) = 1");
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ggs acceptance criteria"};
    std::vector<int> only, expect_fail;
    app.add_option("--only", only, "run only these criteria")->delimiter(',');
    app.add_option("--expect-fail", expect_fail, "criteria documented as failing")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "gradient correctness", gradients},
        {2, "snapping semantics", snapping},
        {3, "LOF oracle equivalence", lof_oracle},
        {4, "double-layer denoising", double_layer},
        {5, "non-watertight preservation", open_surfaces},
        {6, "regularizer effect direction", regularizer_effects},
        {7, "fastmvs accuracy", mvs_accuracy},
        {8, "determinism", determinism},
        {9, "metric identities", metric_identities},
    };
    const std::set<int> selected(only.begin(), only.end());
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());
    std::set<int> failed, ran;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        ran.insert(c.id);
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "] ";
        }
        if (!o.pass) failed.insert(c.id);
        std::printf("criterion %d %-30s %s  (%.1f s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                    seconds_since(t0), o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::set<int> expected_ran;
    for (int id : expected)
        if (ran.count(id)) expected_ran.insert(id);
    std::printf("summary: %zu of %zu passed", ran.size() - failed.size(), ran.size());
    if (!expected_ran.empty()) {
        std::printf("; expected failures:");
        for (int id : expected_ran) std::printf(" %d", id);
    }
    std::printf("\n");
    for (int id : failed)
        if (!expected_ran.count(id)) std::printf("unexpected failure: criterion %d\n", id);
    for (int id : expected_ran)
        if (!failed.count(id)) std::printf("unexpected pass: criterion %d (update the expected-failure list)\n", id);
    return failed == expected_ran ? 0 : 1;
}
