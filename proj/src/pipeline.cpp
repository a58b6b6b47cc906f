// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/pipeline.hpp"

#include "config_text.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>

#ifndef GGS_VERSION
#define GGS_VERSION "0.0.0"
#endif

namespace ggs {

using namespace config_text;
using json = nlohmann::json;

std::string version_string() { return GGS_VERSION; }

// ---------------------------------------------------------------------------
// Configuration

void PipelineConfig::set(const std::string& key, const std::string& raw) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        throw ConfigError("config key '" + key + "' needs a stage prefix (train., mvs., extract., denoise., eval.)");
    }
    const std::string stage = key.substr(0, dot);
    const std::string name = key.substr(dot + 1);
    const std::string v = trim(raw);
    auto as_int = [&] { return static_cast<int>(parse_int(key, v)); };
    if (stage == "train") {
        train.set(name, v);
    } else if (stage == "mvs") {
        if (name == "downsample") mvs.downsample = as_int();
        else if (name == "planes") mvs.planes = as_int();
        else if (name == "depth_min") mvs.depth_min = parse_double(key, v);
        else if (name == "depth_max") mvs.depth_max = parse_double(key, v);
        else if (name == "window") mvs.window = as_int();
        else if (name == "neighbors") mvs.neighbors = as_int();
        else if (name == "min_consistent") mvs.min_consistent = as_int();
        else if (name == "reprojection_tolerance") mvs.reprojection_tolerance = parse_double(key, v);
        else if (name == "depth_tolerance") mvs.depth_tolerance = parse_double(key, v);
        else if (name == "consistency_iterations") mvs.consistency_iterations = as_int();
        else if (name == "min_ncc") mvs.min_ncc = parse_double(key, v);
        else if (name == "subplane_refinement") mvs.subplane_refinement = parse_bool(key, v);
        else if (name == "normal_neighbors") mvs.normal_neighbors = as_int();
        else throw ConfigError("unknown config key '" + key + "'");
    } else if (stage == "extract") {
        if (name == "voxel_size") extract.voxel_size = parse_double(key, v);
        else if (name == "voxel_footprints") extract.voxel_footprints = parse_double(key, v);
        else if (name == "truncation_voxels") extract.integration.truncation_voxels = parse_double(key, v);
        else if (name == "weight_cap") extract.integration.weight_cap = parse_double(key, v);
        else if (name == "min_alpha") extract.integration.min_alpha = parse_double(key, v);
        else throw ConfigError("unknown config key '" + key + "'");
    } else if (stage == "denoise") {
        if (name == "k") lof_k = as_int();
        else if (name == "threshold") denoise.threshold = parse_double(key, v);
        else if (name == "min_component_fraction") denoise.min_component_fraction = parse_double(key, v);
        else throw ConfigError("unknown config key '" + key + "'");
    } else if (stage == "eval") {
        if (name == "samples") {
            const long long n = parse_int(key, v);
            if (n < 1) throw ConfigError("config key '" + key + "' must be positive");
            eval.samples = static_cast<std::size_t>(n);
        } else if (name == "seed") {
            const long long n = parse_int(key, v);
            if (n < 0) throw ConfigError("config key '" + key + "' must be >= 0");
            eval.seed = static_cast<std::uint64_t>(n);
        } else if (name == "variant") {
            if (v == "l2") eval.variant = ChamferVariant::l2;
            else if (v == "squared") eval.variant = ChamferVariant::squared;
            else throw ConfigError("config key '" + key + "' expects l2 or squared");
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    } else {
        throw ConfigError("unknown config stage '" + stage + "' in key '" + key + "'");
    }
}

std::map<std::string, std::string> PipelineConfig::to_map() const {
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : train.to_map()) m["train." + k] = v;
    m["mvs.downsample"] = std::to_string(mvs.downsample);
    m["mvs.planes"] = std::to_string(mvs.planes);
    m["mvs.depth_min"] = format_double(mvs.depth_min);
    m["mvs.depth_max"] = format_double(mvs.depth_max);
    m["mvs.window"] = std::to_string(mvs.window);
    m["mvs.neighbors"] = std::to_string(mvs.neighbors);
    m["mvs.min_consistent"] = std::to_string(mvs.min_consistent);
    m["mvs.reprojection_tolerance"] = format_double(mvs.reprojection_tolerance);
    m["mvs.depth_tolerance"] = format_double(mvs.depth_tolerance);
    m["mvs.consistency_iterations"] = std::to_string(mvs.consistency_iterations);
    m["mvs.min_ncc"] = format_double(mvs.min_ncc);
    m["mvs.subplane_refinement"] = mvs.subplane_refinement ? "true" : "false";
    m["mvs.normal_neighbors"] = std::to_string(mvs.normal_neighbors);
    m["extract.voxel_size"] = format_double(extract.voxel_size);
    m["extract.voxel_footprints"] = format_double(extract.voxel_footprints);
    m["extract.truncation_voxels"] = format_double(extract.integration.truncation_voxels);
    m["extract.weight_cap"] = format_double(extract.integration.weight_cap);
    m["extract.min_alpha"] = format_double(extract.integration.min_alpha);
    m["denoise.k"] = std::to_string(lof_k);
    m["denoise.threshold"] = format_double(denoise.threshold);
    m["denoise.min_component_fraction"] = format_double(denoise.min_component_fraction);
    m["eval.samples"] = std::to_string(eval.samples);
    m["eval.seed"] = std::to_string(eval.seed);
    m["eval.variant"] = eval.variant == ChamferVariant::squared ? "squared" : "l2";
    return m;
}

void PipelineConfig::validate() const {
    train.validate();
    mvs.validate();
    if (extract.voxel_size < 0.0) throw ConfigError("extract.voxel_size must be >= 0 (0 selects it automatically)");
    if (!(extract.voxel_footprints > 0.0)) throw ConfigError("extract.voxel_footprints must be positive");
    if (!(extract.integration.truncation_voxels > 0.0)) throw ConfigError("extract.truncation_voxels must be positive");
    if (!(extract.integration.weight_cap >= 1.0)) throw ConfigError("extract.weight_cap must be >= 1");
    if (!(extract.integration.min_alpha >= 0.0 && extract.integration.min_alpha <= 1.0)) {
        throw ConfigError("extract.min_alpha must lie in [0, 1]");
    }
    if (lof_k < 1) throw ConfigError("denoise.k must be >= 1");
    if (!(denoise.threshold > 1.0)) throw ConfigError("denoise.threshold (LOF threshold) must be greater than 1");
    if (!(denoise.min_component_fraction >= 0.0 && denoise.min_component_fraction <= 1.0)) {
        throw ConfigError("denoise.min_component_fraction must lie in [0, 1]");
    }
    if (eval.samples < 1) throw ConfigError("eval.samples must be positive");
}

PipelineConfig load_pipeline_config(const fs::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

// ---------------------------------------------------------------------------
// Digests and manifest

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "' for hashing");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 initialization failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        const auto n = in.gcount();
        if (n > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(n)) != 1) {
            throw Error("SHA-256 update failed");
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) throw Error("SHA-256 finalization failed");
    std::string hex;
    char two[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(two, sizeof two, "%02x", digest[i]);
        hex += two;
    }
    return hex;
}

FileRecord record_file(const fs::path& path) {
    return {path.generic_string(), sha256_file(path), fs::file_size(path)};
}

namespace {

json files_json(const std::vector<FileRecord>& files) {
    json arr = json::array();
    for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return arr;
}

std::vector<FileRecord> files_from(const json& arr) {
    std::vector<FileRecord> out;
    for (const auto& f : arr) {
        out.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                       f.at("bytes").get<std::uintmax_t>()});
    }
    return out;
}

}  // namespace

void write_manifest(const fs::path& path, const Manifest& m) {
    json j;
    j["tool"] = m.tool;
    j["version"] = m.version;
    j["command"] = m.command;
    j["config"] = m.config;
    j["stages"] = json::array();
    for (const auto& s : m.stages) {
        j["stages"].push_back({{"name", s.name},
                               {"inputs", files_json(s.inputs)},
                               {"outputs", files_json(s.outputs)},
                               {"seconds", s.seconds},
                               {"stats", s.stats},
                               {"warnings", s.warnings}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest '" + path.string() + "'");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing manifest '" + path.string() + "'");
}

Manifest read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read manifest '" + path.string() + "'");
    try {
        const json j = json::parse(in);
        Manifest m;
        m.tool = j.at("tool").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.command = j.at("command").get<std::vector<std::string>>();
        m.config = j.at("config").get<std::map<std::string, std::string>>();
        for (const auto& s : j.at("stages")) {
            StageRecord r;
            r.name = s.at("name").get<std::string>();
            r.inputs = files_from(s.at("inputs"));
            r.outputs = files_from(s.at("outputs"));
            r.seconds = s.at("seconds").get<double>();
            r.stats = s.at("stats").get<std::map<std::string, double>>();
            r.warnings = s.at("warnings").get<std::vector<std::string>>();
            m.stages.push_back(std::move(r));
        }
        return m;
    } catch (const json::exception& e) {
        throw IoError("malformed manifest '" + path.string() + "': " + e.what());
    }
}

std::vector<std::string> verify_manifest(const Manifest& m) {
    std::vector<std::string> bad;
    for (const auto& s : m.stages)
        for (const auto* list : {&s.inputs, &s.outputs})
            for (const auto& f : *list) {
                std::error_code ec;
                if (!fs::exists(f.path, ec) || sha256_file(f.path) != f.sha256) bad.push_back(f.path);
            }
    return bad;
}

// ---------------------------------------------------------------------------
// Scenes

std::vector<CameraModel> SceneData::camera_models() const {
    std::vector<CameraModel> out;
    for (const auto& c : cameras) out.push_back(c.camera);
    return out;
}

std::optional<fs::path> SceneData::reference_mesh() const {
    const fs::path p = dir / "reference_mesh.obj";
    return fs::exists(p) ? std::optional<fs::path>(p) : std::nullopt;
}

std::optional<fs::path> SceneData::reference_cloud() const {
    const fs::path p = dir / "reference_cloud.ply";
    return fs::exists(p) ? std::optional<fs::path>(p) : std::nullopt;
}

fs::path image_path(const fs::path& scene_dir, int id) {
    char name[32];
    std::snprintf(name, sizeof name, "%04d.png", id);
    return scene_dir / "images" / name;
}

SceneData load_scene(const fs::path& dir, bool with_images) {
    SceneData s;
    s.dir = dir;
    s.camera_file = dir / "cameras.txt";
    if (!fs::exists(s.camera_file)) throw IoError("camera file not found: " + s.camera_file.string());
    s.cameras = io::read_cameras(s.camera_file);
    if (s.cameras.empty()) throw IoError("camera file lists no cameras: " + s.camera_file.string());
    for (const auto& c : s.cameras) {
        const fs::path p = image_path(dir, c.id);
        if (!fs::exists(p)) throw IoError("image for camera " + std::to_string(c.id) + " not found: " + p.string());
        s.image_files.push_back(p);
        if (with_images) {
            Image img = io::read_png(p);
            if (img.width != c.camera.width || img.height != c.camera.height) {
                throw IoError(p.string() + ": image is " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                              " but camera " + std::to_string(c.id) + " expects " + std::to_string(c.camera.width) +
                              "x" + std::to_string(c.camera.height));
            }
            s.images.push_back(std::move(img));
        }
    }
    return s;
}

void write_scene(const fs::path& dir, const std::vector<CameraModel>& cameras, const std::vector<Image>& images,
                 const TriangleMesh* reference_mesh, const DensePointCloud* reference_cloud) {
    if (cameras.size() != images.size()) throw InvalidInput("write_scene: one image per camera required");
    fs::create_directories(dir / "images");
    std::vector<io::CameraEntry> entries;
    for (std::size_t i = 0; i < cameras.size(); ++i) {
        entries.push_back({static_cast<int>(i), cameras[i]});
        io::write_png(image_path(dir, static_cast<int>(i)), images[i]);
    }
    io::write_cameras(dir / "cameras.txt", entries);
    if (reference_mesh != nullptr) io::write_obj(dir / "reference_mesh.obj", *reference_mesh);
    if (reference_cloud != nullptr) io::write_point_cloud(dir / "reference_cloud.ply", *reference_cloud);
}

// ---------------------------------------------------------------------------
// Stages

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<FileRecord> scene_inputs(const SceneData& scene, bool images) {
    std::vector<FileRecord> r{record_file(scene.camera_file)};
    if (images)
        for (const auto& p : scene.image_files) r.push_back(record_file(p));
    return r;
}

void require_file(const fs::path& p, const std::string& what) {
    if (!fs::exists(p)) throw IoError(what + " not found: " + p.string());
}

}  // namespace

StageRecord stage_mvs(const SceneData& scene, const MvsConfig& config, const fs::path& out_dir) {
    const auto t0 = Clock::now();
    if (scene.images.size() != scene.cameras.size()) throw InvalidInput("mvs: scene loaded without images");
    std::vector<MvsView> views;
    for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
        views.push_back({scene.cameras[i].id, scene.cameras[i].camera, scene.images[i]});
    }
    const MvsResult r = reconstruct(views, config);
    fs::create_directories(out_dir / artifacts::kDepthDir);
    StageRecord rec;
    rec.name = "mvs";
    rec.inputs = scene_inputs(scene, true);
    const fs::path cloud = out_dir / artifacts::kDenseCloud;
    io::write_point_cloud(cloud, r.cloud);
    rec.outputs.push_back(record_file(cloud));
    for (const auto& d : r.filtered_depths) {
        char name[32];
        std::snprintf(name, sizeof name, "%04d.pfm", d.view_id);
        const fs::path p = out_dir / artifacts::kDepthDir / name;
        io::write_depth_pfm(p, d);
        rec.outputs.push_back(record_file(p));
    }
    rec.stats["points"] = static_cast<double>(r.cloud.size());
    rec.stats["raw_points"] = static_cast<double>(r.fusion.input_points);
    rec.stats["fusion_fallbacks"] = static_cast<double>(r.fusion.fallback_points);
    rec.stats["voxel_size"] = r.fusion.voxel_size;
    rec.stats["depth_min"] = r.depth_min;
    rec.stats["depth_max"] = r.depth_max;
    rec.stats["downsample"] = config.downsample;
    for (const auto& [stage, sec] : r.timings) rec.stats["seconds_" + stage] = sec;
    rec.warnings = r.warnings;
    rec.seconds = since(t0);
    return rec;
}

StageRecord stage_train(const SceneData& scene, const fs::path& cloud_path, const TrainConfig& config,
                        const fs::path& out_dir, const std::optional<fs::path>& initial) {
    const auto t0 = Clock::now();
    if (scene.images.size() != scene.cameras.size()) throw InvalidInput("train: scene loaded without images");
    require_file(cloud_path, "dense point cloud");
    const DensePointCloud cloud = io::read_point_cloud(cloud_path);
    std::optional<GaussianCloud> init;
    if (initial) {
        require_file(*initial, "initial checkpoint");
        init = io::read_gaussians(*initial);
    }
    std::vector<TrainView> views;
    for (std::size_t i = 0; i < scene.cameras.size(); ++i) views.push_back({scene.cameras[i].camera, scene.images[i]});
    fs::create_directories(out_dir);
    TrainOutputs outputs;
    outputs.checkpoint = out_dir / artifacts::kCheckpoint;
    outputs.loss_csv = out_dir / artifacts::kLossCsv;
    const TrainResult r = run_training(config, views, &cloud, init ? &*init : nullptr, outputs);

    StageRecord rec;
    rec.name = "train";
    rec.inputs = scene_inputs(scene, true);
    rec.inputs.push_back(record_file(cloud_path));
    if (initial) rec.inputs.push_back(record_file(*initial));
    rec.outputs = {record_file(*outputs.checkpoint), record_file(*outputs.loss_csv)};
    rec.stats["gaussians"] = static_cast<double>(r.gaussians.size());
    rec.stats["iterations"] = config.iterations;
    rec.stats["median_min_scale"] = median_min_scale(r.gaussians);
    if (!r.history.empty()) {
        rec.stats["final_l_rgb"] = r.history.back().loss.l_rgb;
        rec.stats["final_l_thin"] = r.history.back().loss.l_thin;
        rec.stats["final_l_normal"] = r.history.back().loss.l_normal;
    }
    rec.stats["seconds_optimize"] = r.seconds;
    rec.seconds = since(t0);
    return rec;
}

StageRecord stage_extract(const SceneData& scene, const fs::path& checkpoint, const ExtractOptions& options,
                          const fs::path& out_dir) {
    const auto t0 = Clock::now();
    require_file(checkpoint, "checkpoint");
    const GaussianCloud g = io::read_gaussians(checkpoint);
    const ExtractResult r = extract(g, scene.camera_models(), options);
    fs::create_directories(out_dir);
    StageRecord rec;
    rec.name = "extract";
    rec.inputs = scene_inputs(scene, false);
    rec.inputs.push_back(record_file(checkpoint));
    const fs::path mesh = out_dir / artifacts::kMesh;
    io::write_mesh(mesh, r.mesh);
    rec.outputs.push_back(record_file(mesh));
    rec.stats["vertices"] = static_cast<double>(r.mesh.vertices.size());
    rec.stats["faces"] = static_cast<double>(r.mesh.faces.size());
    rec.stats["boundary_loops"] = static_cast<double>(count_boundary_loops(r.mesh));
    rec.stats["voxel_size"] = r.volume.voxel_size;
    rec.stats["observed_voxels"] = static_cast<double>(r.volume.observed_count());
    rec.stats["pixels_used"] = static_cast<double>(r.stats.pixels_used);
    rec.stats["pixels_low_alpha"] = static_cast<double>(r.stats.pixels_low_alpha);
    rec.stats["low_alpha_updates"] = static_cast<double>(r.stats.low_alpha_updates);
    rec.warnings = r.warnings;
    rec.seconds = since(t0);
    return rec;
}

StageRecord stage_denoise(const fs::path& mesh_path, const fs::path& cloud_path, int k, const DenoiseOptions& options,
                          const fs::path& out_dir) {
    const auto t0 = Clock::now();
    if (!(options.threshold > 1.0)) throw ConfigError("LOF threshold must be greater than 1");
    require_file(mesh_path, "mesh");
    require_file(cloud_path, "reference point cloud");
    const TriangleMesh mesh = io::read_mesh(mesh_path);
    const LofModel model = LofModel::fit(io::read_points(cloud_path), k);
    const DenoiseResult r = denoise_mesh(mesh, model, options);
    fs::create_directories(out_dir);
    StageRecord rec;
    rec.name = "denoise";
    rec.inputs = {record_file(mesh_path), record_file(cloud_path)};
    const fs::path out = out_dir / artifacts::kDenoisedMesh;
    io::write_mesh(out, r.mesh);
    rec.outputs.push_back(record_file(out));
    rec.stats["faces_in"] = static_cast<double>(mesh.faces.size());
    rec.stats["faces_out"] = static_cast<double>(r.mesh.faces.size());
    rec.stats["outlier_vertices"] = static_cast<double>(r.stats.outlier_vertices);
    rec.stats["faces_removed_lof"] = static_cast<double>(r.stats.faces_removed_lof);
    rec.stats["faces_removed_components"] = static_cast<double>(r.stats.faces_removed_components);
    rec.stats["boundary_loops"] = static_cast<double>(count_boundary_loops(r.mesh));
    rec.stats["k"] = k;
    rec.stats["threshold"] = options.threshold;
    rec.seconds = since(t0);
    return rec;
}

StageRecord stage_eval(const SceneData& scene, const fs::path& checkpoint, const std::optional<fs::path>& mesh_path,
                       const std::optional<fs::path>& reference, const EvalOptions& options, const fs::path& out_dir) {
    const auto t0 = Clock::now();
    if (scene.images.size() != scene.cameras.size()) throw InvalidInput("eval: scene loaded without images");
    require_file(checkpoint, "checkpoint");
    const GaussianCloud g = io::read_gaussians(checkpoint);
    EvalInputs in;
    in.gaussians = &g;
    for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
        in.views.push_back({scene.cameras[i].id, scene.cameras[i].camera, scene.images[i]});
    }
    std::optional<TriangleMesh> mesh, ref_mesh;
    std::optional<std::vector<Vec3>> ref_points;
    StageRecord rec;
    rec.name = "eval";
    rec.inputs = scene_inputs(scene, true);
    rec.inputs.push_back(record_file(checkpoint));
    if (mesh_path) {
        require_file(*mesh_path, "mesh");
        mesh = io::read_mesh(*mesh_path);
        in.mesh = &*mesh;
        rec.inputs.push_back(record_file(*mesh_path));
    }
    if (reference) {
        require_file(*reference, "reference geometry");
        const bool has_faces = reference->extension() == ".obj" || [&] {
            const io::PlyData ply = io::read_ply(*reference);
            const io::PlyElement* f = ply.find("face");
            return f != nullptr && f->count > 0;
        }();
        if (has_faces) {
            ref_mesh = io::read_mesh(*reference);
            in.reference_mesh = &*ref_mesh;
        } else {
            ref_points = io::read_points(*reference);
            in.reference_points = &*ref_points;
        }
        rec.inputs.push_back(record_file(*reference));
    }
    const EvalReport report = evaluate(in, options);
    fs::create_directories(out_dir);
    const fs::path csv = out_dir / artifacts::kReportCsv;
    const fs::path text = out_dir / artifacts::kReportText;
    write_report_csv(csv, report);
    {
        std::ofstream out(text);
        if (!out) throw IoError("cannot write '" + text.string() + "'");
        out << format_report(report);
    }
    rec.outputs = {record_file(csv)};
    rec.stats["ssim"] = report.ssim;
    if (!report.psnr.infinite) rec.stats["psnr"] = report.psnr.db;
    if (report.chamfer) rec.stats["chamfer"] = *report.chamfer;
    rec.stats["seconds_evaluate"] = report.runtime_seconds;
    rec.seconds = since(t0);
    return rec;
}

}  // namespace ggs
