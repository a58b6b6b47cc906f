// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Optimization loop: photometric loss plus the flattening and normal
// regularizers, Adam updates, and periodic snapping of Gaussian centers
// onto the dense guidance cloud.
#pragma once

#include "ggs/gradients.hpp"
#include "ggs/guidance.hpp"
#include "ggs/regularizers.hpp"
#include "ggs/render.hpp"
#include "ggs/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ggs {

struct TrainConfig {
    int iterations = 2000;
    double alpha = 100.0;
    double beta = 0.1;
    double lambda_dssim = kDssimWeight;

    int snap_interval = 500;
    /// Snapping stops at this iteration; negative means 80% of iterations.
    int snap_stop = -1;
    /// Gaussians whose opacity falls below this are dropped at every snap
    /// interval; 0 disables pruning.
    double prune_opacity = 0.005;

    double lr_position = 1.6e-4;
    double lr_position_final = 1.6e-6;
    double lr_rotation = 1e-3;
    double lr_scale = 5e-3;
    double lr_opacity = 5e-2;
    double lr_color = 2.5e-3;

    bool enable_move = true;
    bool enable_flatten = true;
    bool enable_rotate = true;

    /// Initial Gaussians drawn from the dense cloud; 0 uses every point.
    int subsample = 0;
    double init_opacity = 0.1;
    Vec3 background = Vec3::Zero();
    std::uint64_t seed = 0;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
    [[nodiscard]] int effective_snap_stop() const;
    /// Position learning rate at an iteration (exponential decay).
    [[nodiscard]] double position_lr(int iteration) const;
    [[nodiscard]] LossWeights weights() const;

    /// Key/value view of every field, used for the config file and manifests.
    [[nodiscard]] std::map<std::string, std::string> to_map() const;
    /// Applies one `key = value`; unknown keys and bad values throw ConfigError.
    void set(const std::string& key, const std::string& value);
};

/// Reads `key = value` lines; '#' starts a comment.
TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base = {});
void save_train_config(const std::filesystem::path& path, const TrainConfig& config);

struct TrainView {
    CameraModel camera;
    Image image;
};

struct LossRecord {
    int iteration = 0;
    LossBreakdown loss;
};

using ParameterBlock = std::array<double, kParamsPerPrimitive>;

struct TrainState {
    GaussianCloud gaussians;
    std::vector<ParameterBlock> first_moment;
    std::vector<ParameterBlock> second_moment;
    int iteration = 0;
    std::vector<LossRecord> history;
    /// Last nearest-point pairing (empty without guidance).
    GuidancePairing pairing;

    explicit TrainState(GaussianCloud initial = {});
    /// Throws Error when moment shapes drift from the cloud.
    void check_shapes() const;
};

/// One Gaussian per sampled cloud point. Sampling is a seeded draw without
/// replacement; the chosen points keep their cloud order.
GaussianCloud init_from_cloud(const DensePointCloud& cloud, int subsample, std::uint64_t seed = 0,
                              double init_opacity = 0.1);

/// Guidance data: the dense cloud with its index. May be absent when no
/// guidance term is enabled.
struct Guidance {
    const DensePointCloud* cloud = nullptr;
    const SpatialIndex* index = nullptr;
};

/// Snaps centers onto the cloud on the configured schedule and returns
/// whether a snap happened.
bool maybe_snap(TrainState& state, const SpatialIndex& index, const TrainConfig& config);

/// Drops near-transparent Gaussians (with their moments) on the snap
/// interval; returns the number removed.
std::size_t maybe_prune(TrainState& state, const TrainConfig& config);

/// One optimizer step on views[iteration % views.size()]. Disabled terms
/// contribute exactly zero gradient. A non-finite loss term throws Error
/// naming the term.
void train_step(TrainState& state, const std::vector<TrainView>& views, const TrainConfig& config,
                const Guidance& guidance = {});

struct TrainResult {
    GaussianCloud gaussians;
    std::vector<LossRecord> history;
    double seconds = 0.0;
};

struct TrainOutputs {
    std::optional<std::filesystem::path> checkpoint;
    std::optional<std::filesystem::path> loss_csv;
};

/// Full schedule: snap/prune, then step, for config.iterations steps.
/// Starts from `initial` when given, otherwise from the dense cloud.
/// ConfigError when a guidance term is enabled without a cloud, or when
/// there is nothing to initialize from.
TrainResult run_training(const TrainConfig& config, const std::vector<TrainView>& views,
                         const DensePointCloud* cloud, const GaussianCloud* initial = nullptr,
                         const TrainOutputs& outputs = {});

void write_loss_csv(const std::filesystem::path& path, const std::vector<LossRecord>& history);

/// Median over Gaussians of the smallest activated scale.
double median_min_scale(const GaussianCloud& gaussians);

}  // namespace ggs
