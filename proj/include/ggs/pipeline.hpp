// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// File-based pipeline stages (mvs -> train -> extract -> denoise -> eval)
// and the provenance manifest that records every file they touch.
#pragma once

#include "ggs/eval_metrics.hpp"
#include "ggs/fastmvs.hpp"
#include "ggs/io.hpp"
#include "ggs/lof_denoise.hpp"
#include "ggs/mesh_extract.hpp"
#include "ggs/trainer.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ggs {

namespace fs = std::filesystem;

std::string version_string();

/// Settings for every stage. Config files use `stage.key = value` with the
/// stages train, mvs, extract, denoise and eval.
struct PipelineConfig {
    TrainConfig train;
    MvsConfig mvs;
    ExtractOptions extract;
    int lof_k = 20;
    DenoiseOptions denoise;
    EvalOptions eval;

    void set(const std::string& key, const std::string& value);
    [[nodiscard]] std::map<std::string, std::string> to_map() const;
    void validate() const;
};

/// Throws ConfigError naming the file and line on unknown keys or bad values.
PipelineConfig load_pipeline_config(const fs::path& path, PipelineConfig base = {});

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

struct FileRecord {
    std::string path;
    std::string sha256;
    std::uintmax_t bytes = 0;
    bool operator==(const FileRecord&) const = default;
};
FileRecord record_file(const fs::path& path);

struct StageRecord {
    std::string name;
    std::vector<FileRecord> inputs;
    std::vector<FileRecord> outputs;
    double seconds = 0.0;
    std::map<std::string, double> stats;
    std::vector<std::string> warnings;
    bool operator==(const StageRecord&) const = default;
};

struct Manifest {
    std::string tool = "ggs";
    std::string version = version_string();
    std::vector<std::string> command;
    std::map<std::string, std::string> config;
    std::vector<StageRecord> stages;
    bool operator==(const Manifest&) const = default;
};

void write_manifest(const fs::path& path, const Manifest& manifest);
Manifest read_manifest(const fs::path& path);
/// Paths whose current digest differs from the record (or that vanished).
std::vector<std::string> verify_manifest(const Manifest& manifest);

/// A scene directory: cameras.txt plus images/<id>.png with the id
/// zero-padded to four digits. Optional reference geometry:
/// reference_mesh.obj and reference_cloud.ply.
struct SceneData {
    fs::path dir;
    fs::path camera_file;
    std::vector<io::CameraEntry> cameras;
    std::vector<fs::path> image_files;
    std::vector<Image> images;  // empty when loaded without images

    [[nodiscard]] std::vector<CameraModel> camera_models() const;
    [[nodiscard]] std::optional<fs::path> reference_mesh() const;
    [[nodiscard]] std::optional<fs::path> reference_cloud() const;
};

fs::path image_path(const fs::path& scene_dir, int id);
/// IoError naming the missing or malformed file.
SceneData load_scene(const fs::path& dir, bool with_images = true);
/// Writes cameras, images and reference geometry of a synthetic scene.
void write_scene(const fs::path& dir, const std::vector<CameraModel>& cameras, const std::vector<Image>& images,
                 const TriangleMesh* reference_mesh = nullptr, const DensePointCloud* reference_cloud = nullptr);

/// Output names inside a stage's output directory.
namespace artifacts {
inline constexpr const char* kDenseCloud = "dense.ply";
inline constexpr const char* kDepthDir = "depth";
inline constexpr const char* kCheckpoint = "checkpoint.ply";
inline constexpr const char* kLossCsv = "loss.csv";
inline constexpr const char* kMesh = "mesh.obj";
inline constexpr const char* kDenoisedMesh = "mesh_denoised.obj";
inline constexpr const char* kReportCsv = "report.csv";
inline constexpr const char* kReportText = "report.txt";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifacts

StageRecord stage_mvs(const SceneData& scene, const MvsConfig& config, const fs::path& out_dir);
StageRecord stage_train(const SceneData& scene, const fs::path& cloud, const TrainConfig& config,
                        const fs::path& out_dir, const std::optional<fs::path>& initial = std::nullopt);
StageRecord stage_extract(const SceneData& scene, const fs::path& checkpoint, const ExtractOptions& options,
                          const fs::path& out_dir);
StageRecord stage_denoise(const fs::path& mesh, const fs::path& cloud, int k, const DenoiseOptions& options,
                          const fs::path& out_dir);
/// Chamfer is computed against `reference` (a mesh .obj/.ply with faces, or
/// a point cloud .ply) when given.
StageRecord stage_eval(const SceneData& scene, const fs::path& checkpoint, const std::optional<fs::path>& mesh,
                       const std::optional<fs::path>& reference, const EvalOptions& options, const fs::path& out_dir);

}  // namespace ggs
