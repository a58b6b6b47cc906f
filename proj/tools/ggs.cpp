// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// ggs command line tool. Exit codes: 0 success, 1 runtime failure,
// 2 usage, configuration or missing-input error.
#include "ggs/parallel.hpp"
#include "ggs/pipeline.hpp"
#include "ggs/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using namespace ggs;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string out_dir = ".";
    std::vector<std::string> sets;
};

struct Toggles {
    bool no_move = false, no_flatten = false, no_rotate = false;
    bool only_move = false, only_flatten = false, only_rotate = false;

    void apply(TrainConfig& c) const {
        const int only = int(only_move) + int(only_flatten) + int(only_rotate);
        const int no = int(no_move) + int(no_flatten) + int(no_rotate);
        if (only > 1 || (only == 1 && no > 0)) {
            throw UsageError("conflicting toggles: --only-* cannot be combined with another toggle");
        }
        if (only == 1) {
            c.enable_move = only_move;
            c.enable_flatten = only_flatten;
            c.enable_rotate = only_rotate;
        }
        if (no_move) c.enable_move = false;
        if (no_flatten) c.enable_flatten = false;
        if (no_rotate) c.enable_rotate = false;
    }

    void add_to(CLI::App* app) {
        app->add_flag("--no-move", no_move, "disable the guided movement (snapping) term");
        app->add_flag("--no-flatten", no_flatten, "disable the flattening term");
        app->add_flag("--no-rotate", no_rotate, "disable the normal alignment term");
        app->add_flag("--only-move", only_move, "enable movement only");
        app->add_flag("--only-flatten", only_flatten, "enable flattening only");
        app->add_flag("--only-rotate", only_rotate, "enable rotation only");
    }
};

// Per-subcommand flag values; optional ones override the config file.
struct Flags {
    std::string scene;
    std::string cloud;
    std::string checkpoint;
    std::string init;
    std::string mesh;
    std::string reference;
    bool skip_mvs = false;
    bool no_reference = false;
    std::optional<int> downsample, planes, iterations, k;
    std::optional<double> depth_min, depth_max, voxel_size, lof_threshold, min_component_frac;
    std::optional<std::size_t> samples;
    bool squared = false;
    Toggles toggles;
    // synth
    std::string kind = "tube";
    synth::SceneOptions synth;
};

PipelineConfig resolve_config(const Globals& g, const Flags& f) {
    PipelineConfig c;
    if (g.config) c = load_pipeline_config(*g.config, c);
    for (const auto& kv : g.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (g.seed) {
        c.train.seed = *g.seed;
        c.eval.seed = *g.seed;
    }
    if (f.downsample) c.mvs.downsample = *f.downsample;
    if (f.planes) c.mvs.planes = *f.planes;
    if (f.depth_min) c.mvs.depth_min = *f.depth_min;
    if (f.depth_max) c.mvs.depth_max = *f.depth_max;
    if (f.iterations) c.train.iterations = *f.iterations;
    if (f.voxel_size) c.extract.voxel_size = *f.voxel_size;
    if (f.k) c.lof_k = *f.k;
    if (f.lof_threshold) c.denoise.threshold = *f.lof_threshold;
    if (f.min_component_frac) c.denoise.min_component_fraction = *f.min_component_frac;
    if (f.samples) c.eval.samples = *f.samples;
    if (f.squared) c.eval.variant = ChamferVariant::squared;
    f.toggles.apply(c.train);
    c.validate();
    return c;
}

void require(const std::string& value, const std::string& flag) {
    if (value.empty()) throw UsageError(flag + " is required");
}

fs::path out_path(const Globals& g) {
    fs::create_directories(g.out_dir);
    return g.out_dir;
}

void report_stage(const StageRecord& r) {
    std::fprintf(stderr, "[%s] %.2f s", r.name.c_str(), r.seconds);
    for (const auto& [k, v] : r.stats) {
        if (k.rfind("seconds_", 0) == 0) continue;
        std::fprintf(stderr, "  %s=%g", k.c_str(), v);
    }
    std::fprintf(stderr, "\n");
    for (const auto& w : r.warnings) std::fprintf(stderr, "[%s] warning: %s\n", r.name.c_str(), w.c_str());
}

std::optional<fs::path> default_reference(const SceneData& scene) {
    if (auto p = scene.reference_cloud()) return p;
    return scene.reference_mesh();
}

int run(const std::string& name, Manifest& manifest, const fs::path& out, const std::function<void()>& body) {
    try {
        body();
    } catch (const UsageError& e) {
        std::cerr << "ggs " << name << ": usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "ggs " << name << ": config error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "ggs " << name << ": input error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "ggs " << name << ": error: " << e.what() << "\n";
        return kRuntime;
    }
    write_manifest(out / artifacts::kManifest, manifest);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ggs: Gaussian splatting reconstruction of thin, non-watertight surfaces"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    Globals g;
    Flags f;
    app.add_option("--config", g.config, "config file with stage.key = value lines");
    app.add_option("--seed", g.seed, "seed for training initialization and evaluation sampling");
    app.add_option("--threads", g.threads, "worker threads (default: GGS_THREADS or hardware)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--set", g.sets, "override one config key, e.g. --set train.iterations=500");

    auto* mvs = app.add_subcommand("mvs", "dense point cloud from calibrated images");
    auto* train = app.add_subcommand("train", "optimize Gaussians guided by the dense cloud");
    auto* extract = app.add_subcommand("extract", "TSDF fusion of rendered depth and marching cubes");
    auto* denoise = app.add_subcommand("denoise", "LOF removal of redundant mesh layers");
    auto* eval = app.add_subcommand("eval", "SSIM, PSNR and chamfer distance report");
    auto* pipeline = app.add_subcommand("pipeline", "mvs, train, extract, denoise and eval in sequence");
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic scene directory");
    for (auto* sub : {mvs, train, extract, denoise, eval, pipeline, synth_cmd}) sub->fallthrough();

    auto add_scene = [&](CLI::App* sub) { sub->add_option("--scene", f.scene, "scene directory (cameras.txt, images/)"); };
    auto add_mvs = [&](CLI::App* sub) {
        sub->add_option("--downsample", f.downsample, "image downsampling factor");
        sub->add_option("--planes", f.planes, "depth hypotheses");
        sub->add_option("--depth-min", f.depth_min, "nearest depth hypothesis");
        sub->add_option("--depth-max", f.depth_max, "farthest depth hypothesis");
    };
    auto add_train = [&](CLI::App* sub) {
        sub->add_option("--iterations", f.iterations, "optimization steps");
        f.toggles.add_to(sub);
    };
    auto add_denoise = [&](CLI::App* sub) {
        sub->add_option("--k", f.k, "LOF neighborhood size");
        sub->add_option("--lof-threshold", f.lof_threshold, "vertices scoring above this are outliers (> 1)");
        sub->add_option("--min-component-frac", f.min_component_frac,
                        "drop components smaller than this fraction of the largest");
    };
    auto add_eval = [&](CLI::App* sub) {
        sub->add_option("--samples", f.samples, "surface samples for the chamfer distance");
        sub->add_flag("--squared", f.squared, "squared chamfer variant");
    };

    add_scene(mvs);
    add_mvs(mvs);

    add_scene(train);
    train->add_option("--cloud", f.cloud, "dense point cloud (PLY)");
    train->add_option("--init", f.init, "start from this checkpoint instead of the cloud");
    add_train(train);

    add_scene(extract);
    extract->add_option("--checkpoint", f.checkpoint, "trained Gaussians (PLY)");
    extract->add_option("--voxel-size", f.voxel_size, "TSDF voxel edge (0: automatic)");

    denoise->add_option("--mesh", f.mesh, "mesh to clean (OBJ or PLY)");
    denoise->add_option("--cloud", f.cloud, "reference point cloud (PLY)");
    add_denoise(denoise);

    add_scene(eval);
    eval->add_option("--checkpoint", f.checkpoint, "trained Gaussians (PLY)");
    eval->add_option("--mesh", f.mesh, "predicted mesh for the chamfer distance");
    eval->add_option("--reference", f.reference, "ground truth mesh or point cloud (default: from the scene)");
    add_eval(eval);

    add_scene(pipeline);
    pipeline->add_flag("--skip-mvs", f.skip_mvs, "use --cloud instead of running mvs");
    pipeline->add_option("--cloud", f.cloud, "precomputed dense point cloud (PLY) for --skip-mvs");
    pipeline->add_option("--reference", f.reference, "ground truth for the chamfer distance");
    pipeline->add_flag("--no-reference", f.no_reference, "skip the chamfer distance");
    add_mvs(pipeline);
    add_train(pipeline);
    pipeline->add_option("--voxel-size", f.voxel_size, "TSDF voxel edge (0: automatic)");
    add_denoise(pipeline);
    add_eval(pipeline);

    synth_cmd->add_option("kind", f.kind, "sphere, tube or plane")
        ->check(CLI::IsMember({"sphere", "tube", "plane"}))
        ->capture_default_str();
    synth_cmd->add_option("--views", f.synth.views, "camera count")->capture_default_str();
    synth_cmd->add_option("--width", f.synth.width, "image width")->capture_default_str();
    synth_cmd->add_option("--height", f.synth.height, "image height")->capture_default_str();
    synth_cmd->add_option("--points", f.synth.cloud_points, "reference cloud samples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    Manifest manifest;
    manifest.command.assign(argv, argv + argc);
    const auto sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    fs::path out;

    try {
        if (g.threads) set_thread_count(*g.threads);
        out = out_path(g);
    } catch (const std::exception& e) {
        std::cerr << "ggs " << name << ": cannot prepare output directory: " << e.what() << "\n";
        return kUsage;
    }

    return run(name, manifest, out, [&] {
        if (name == "synth") {
            if (g.seed) f.synth.seed = *g.seed;
            const synth::Scene s = synth::make_scene(f.kind, f.synth);
            write_scene(out, s.cameras, s.images, &s.mesh, &s.cloud);
            StageRecord r;
            r.name = "synth";
            const SceneData written = load_scene(out, false);
            r.outputs.push_back(record_file(written.camera_file));
            for (const auto& p : written.image_files) r.outputs.push_back(record_file(p));
            r.outputs.push_back(record_file(out / "reference_mesh.obj"));
            r.outputs.push_back(record_file(out / "reference_cloud.ply"));
            r.stats["views"] = f.synth.views;
            manifest.stages.push_back(r);
            report_stage(r);
            return;
        }

        const PipelineConfig config = resolve_config(g, f);
        manifest.config = config.to_map();
        auto record = [&](StageRecord r) {
            report_stage(r);
            manifest.stages.push_back(std::move(r));
            // Rewritten after every stage so an aborted run still documents what finished.
            write_manifest(out / artifacts::kManifest, manifest);
        };

        if (name == "mvs") {
            require(f.scene, "--scene");
            record(stage_mvs(load_scene(f.scene), config.mvs, out));
        } else if (name == "train") {
            require(f.scene, "--scene");
            require(f.cloud, "--cloud");
            std::optional<fs::path> init;
            if (!f.init.empty()) init = f.init;
            record(stage_train(load_scene(f.scene), f.cloud, config.train, out, init));
        } else if (name == "extract") {
            require(f.scene, "--scene");
            require(f.checkpoint, "--checkpoint");
            record(stage_extract(load_scene(f.scene, false), f.checkpoint, config.extract, out));
        } else if (name == "denoise") {
            require(f.mesh, "--mesh");
            require(f.cloud, "--cloud");
            record(stage_denoise(f.mesh, f.cloud, config.lof_k, config.denoise, out));
        } else if (name == "eval") {
            require(f.scene, "--scene");
            require(f.checkpoint, "--checkpoint");
            const SceneData scene = load_scene(f.scene);
            std::optional<fs::path> mesh, reference;
            if (!f.mesh.empty()) mesh = f.mesh;
            reference = f.reference.empty() ? default_reference(scene) : std::optional<fs::path>(f.reference);
            record(stage_eval(scene, f.checkpoint, mesh, reference, config.eval, out));
        } else if (name == "pipeline") {
            require(f.scene, "--scene");
            if (f.skip_mvs != !f.cloud.empty()) throw UsageError("--skip-mvs and --cloud go together");
            const SceneData scene = load_scene(f.scene);
            fs::path cloud = f.cloud;
            if (!f.skip_mvs) {
                record(stage_mvs(scene, config.mvs, out));
                cloud = out / artifacts::kDenseCloud;
            } else if (!fs::exists(cloud)) {
                throw IoError("dense point cloud not found: " + cloud.string());
            }
            record(stage_train(scene, cloud, config.train, out));
            const fs::path checkpoint = out / artifacts::kCheckpoint;
            record(stage_extract(scene, checkpoint, config.extract, out));
            record(stage_denoise(out / artifacts::kMesh, cloud, config.lof_k, config.denoise, out));
            std::optional<fs::path> reference;
            if (!f.no_reference) {
                reference = f.reference.empty() ? default_reference(scene) : std::optional<fs::path>(f.reference);
            }
            record(stage_eval(scene, checkpoint, out / artifacts::kDenoisedMesh, reference, config.eval, out));
            std::ifstream report(out / artifacts::kReportText);
            std::cout << report.rdbuf();
        }
    });
}
