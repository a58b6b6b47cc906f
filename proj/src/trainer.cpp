// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/trainer.hpp"

#include "ggs/gaussian.hpp"
#include "ggs/io.hpp"

#include "config_text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace ggs {
using namespace config_text;
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-15;
constexpr double kMinInitScale = 1e-4;

// Indices 0..2 position, 3..6 rotation, 7..9 log-scale, 10 opacity, 11..13 color.
std::array<double, kParamsPerPrimitive> learning_rates(const TrainConfig& c, int iteration) {
    std::array<double, kParamsPerPrimitive> lr{};
    const double pos = c.position_lr(iteration);
    for (int k = 0; k < 3; ++k) lr[static_cast<std::size_t>(k)] = pos;
    for (int k = 3; k < 7; ++k) lr[static_cast<std::size_t>(k)] = c.lr_rotation;
    for (int k = 7; k < 10; ++k) lr[static_cast<std::size_t>(k)] = c.lr_scale;
    lr[10] = c.lr_opacity;
    for (int k = 11; k < 14; ++k) lr[static_cast<std::size_t>(k)] = c.lr_color;
    return lr;
}

bool on_schedule(int iteration, int interval) { return interval > 0 && iteration % interval == 0; }

void require_finite(double v, const char* term, int iteration) {
    if (!std::isfinite(v)) {
        throw Error("non-finite loss term " + std::string(term) + " at iteration " + std::to_string(iteration));
    }
}

}  // namespace

void TrainConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (iterations <= 0) fail("iterations must be > 0");
    if (snap_interval <= 0) fail("snap_interval must be > 0");
    if (alpha < 0 || beta < 0) fail("alpha and beta must be >= 0");
    if (lambda_dssim < 0 || lambda_dssim > 1) fail("lambda_dssim must be in [0, 1]");
    for (double lr : {lr_position, lr_position_final, lr_rotation, lr_scale, lr_opacity, lr_color}) {
        if (!(lr > 0) || !std::isfinite(lr)) fail("learning rates must be > 0");
    }
    if (subsample < 0) fail("subsample must be >= 0");
    if (!(init_opacity > 0 && init_opacity < 1)) fail("init_opacity must be in (0, 1)");
    if (prune_opacity < 0 || prune_opacity >= 1) fail("prune_opacity must be in [0, 1)");
}

int TrainConfig::effective_snap_stop() const {
    return snap_stop >= 0 ? snap_stop : static_cast<int>(0.8 * iterations);
}

double TrainConfig::position_lr(int iteration) const {
    const double t = std::clamp(static_cast<double>(iteration) / iterations, 0.0, 1.0);
    return std::exp((1.0 - t) * std::log(lr_position) + t * std::log(lr_position_final));
}

LossWeights TrainConfig::weights() const {
    return {enable_flatten ? alpha : 0.0, enable_rotate ? beta : 0.0};
}

std::map<std::string, std::string> TrainConfig::to_map() const {
    std::map<std::string, std::string> m;
    m["iterations"] = std::to_string(iterations);
    m["alpha"] = format_double(alpha);
    m["beta"] = format_double(beta);
    m["lambda_dssim"] = format_double(lambda_dssim);
    m["snap_interval"] = std::to_string(snap_interval);
    m["snap_stop"] = std::to_string(snap_stop);
    m["prune_opacity"] = format_double(prune_opacity);
    m["lr_position"] = format_double(lr_position);
    m["lr_position_final"] = format_double(lr_position_final);
    m["lr_rotation"] = format_double(lr_rotation);
    m["lr_scale"] = format_double(lr_scale);
    m["lr_opacity"] = format_double(lr_opacity);
    m["lr_color"] = format_double(lr_color);
    m["enable_move"] = enable_move ? "true" : "false";
    m["enable_flatten"] = enable_flatten ? "true" : "false";
    m["enable_rotate"] = enable_rotate ? "true" : "false";
    m["subsample"] = std::to_string(subsample);
    m["init_opacity"] = format_double(init_opacity);
    m["background"] = format_double(background.x()) + "," + format_double(background.y()) + "," +
                      format_double(background.z());
    m["seed"] = std::to_string(seed);
    return m;
}

void TrainConfig::set(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    auto as_int = [&] {
        const long long i = parse_int(key, v);
        if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
            throw ConfigError("config key '" + key + "': value out of range");
        return static_cast<int>(i);
    };
    if (key == "iterations") iterations = as_int();
    else if (key == "alpha") alpha = parse_double(key, v);
    else if (key == "beta") beta = parse_double(key, v);
    else if (key == "lambda_dssim") lambda_dssim = parse_double(key, v);
    else if (key == "snap_interval") snap_interval = as_int();
    else if (key == "snap_stop") snap_stop = as_int();
    else if (key == "prune_opacity") prune_opacity = parse_double(key, v);
    else if (key == "lr_position") lr_position = parse_double(key, v);
    else if (key == "lr_position_final") lr_position_final = parse_double(key, v);
    else if (key == "lr_rotation") lr_rotation = parse_double(key, v);
    else if (key == "lr_scale") lr_scale = parse_double(key, v);
    else if (key == "lr_opacity") lr_opacity = parse_double(key, v);
    else if (key == "lr_color") lr_color = parse_double(key, v);
    else if (key == "enable_move") enable_move = parse_bool(key, v);
    else if (key == "enable_flatten") enable_flatten = parse_bool(key, v);
    else if (key == "enable_rotate") enable_rotate = parse_bool(key, v);
    else if (key == "subsample") subsample = as_int();
    else if (key == "init_opacity") init_opacity = parse_double(key, v);
    else if (key == "seed") {
        const long long s = parse_int(key, v);
        if (s < 0) throw ConfigError("config key 'seed' must be >= 0");
        seed = static_cast<std::uint64_t>(s);
    } else if (key == "background") {
        std::stringstream ss(v);
        std::string part;
        Vec3 bg;
        int n = 0;
        while (std::getline(ss, part, ',')) {
            if (n >= 3) throw ConfigError("config key 'background' expects r,g,b");
            bg[n++] = parse_double(key, trim(part));
        }
        if (n != 3) throw ConfigError("config key 'background' expects r,g,b");
        background = bg;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

void save_train_config(const std::filesystem::path& path, const TrainConfig& config) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (const auto& [k, v] : config.to_map()) out << k << " = " << v << "\n";
}

TrainState::TrainState(GaussianCloud initial)
    : gaussians(std::move(initial)),
      first_moment(gaussians.size(), ParameterBlock{}),
      second_moment(gaussians.size(), ParameterBlock{}) {}

void TrainState::check_shapes() const {
    if (first_moment.size() != gaussians.size() || second_moment.size() != gaussians.size()) {
        throw Error("optimizer state has " + std::to_string(first_moment.size()) + " entries for " +
                    std::to_string(gaussians.size()) + " Gaussians");
    }
}

GaussianCloud init_from_cloud(const DensePointCloud& cloud, int subsample, std::uint64_t seed, double init_opacity) {
    if (cloud.empty()) throw InvalidInput("cannot initialize Gaussians from an empty point cloud");
    const std::size_t n = cloud.size();
    std::vector<std::size_t> chosen;
    if (subsample <= 0 || static_cast<std::size_t>(subsample) >= n) {
        chosen.resize(n);
        for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
    } else {
        // Partial Fisher-Yates with explicit draws, so the sample does not
        // depend on the standard library's distribution implementations.
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::mt19937_64 rng(seed);
        const auto m = static_cast<std::size_t>(subsample);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
            std::swap(perm[i], perm[j]);
        }
        chosen.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
        std::sort(chosen.begin(), chosen.end());
    }

    std::vector<Vec3> pts;
    pts.reserve(chosen.size());
    for (auto i : chosen) pts.push_back(cloud.positions[i]);
    const SpatialIndex index(pts);
    const double opacity_logit = logit(init_opacity);

    GaussianCloud out;
    out.primitives.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto nb = index.knn(pts[i], 3, static_cast<int>(i));
        double mean = 0.0;
        for (const auto& b : nb) mean += b.distance();
        mean = nb.empty() ? 0.0 : mean / static_cast<double>(nb.size());
        const double scale = std::isfinite(mean) ? std::max(mean, kMinInitScale) : kMinInitScale;
        GaussianPrimitive& g = out.primitives[i];
        g.position = pts[i];
        g.log_scale = Vec3::Constant(std::log(scale));
        g.opacity_logit = opacity_logit;
    }
    return out;
}

bool maybe_snap(TrainState& state, const SpatialIndex& index, const TrainConfig& config) {
    if (!config.enable_move) return false;
    if (!on_schedule(state.iteration, config.snap_interval) || state.iteration >= config.effective_snap_stop()) {
        return false;
    }
    auto [snapped, pairing] = snap_gaussians(state.gaussians, index);
    state.gaussians = std::move(snapped);
    state.pairing = std::move(pairing);
    return true;
}

std::size_t maybe_prune(TrainState& state, const TrainConfig& config) {
    if (config.prune_opacity <= 0.0 || state.iteration == 0 || !on_schedule(state.iteration, config.snap_interval)) {
        return 0;
    }
    state.check_shapes();
    std::size_t kept = 0;
    for (std::size_t i = 0; i < state.gaussians.size(); ++i) {
        if (state.gaussians[i].opacity() < config.prune_opacity) continue;
        state.gaussians.primitives[kept] = state.gaussians.primitives[i];
        state.first_moment[kept] = state.first_moment[i];
        state.second_moment[kept] = state.second_moment[i];
        ++kept;
    }
    const std::size_t removed = state.gaussians.size() - kept;
    state.gaussians.primitives.resize(kept);
    state.first_moment.resize(kept);
    state.second_moment.resize(kept);
    if (removed > 0) state.pairing = {};
    return removed;
}

void train_step(TrainState& state, const std::vector<TrainView>& views, const TrainConfig& config,
                const Guidance& guidance) {
    if (views.empty()) throw InvalidInput("training needs at least one view");
    state.check_shapes();
    const bool need_normals = config.enable_rotate;
    if (need_normals && (guidance.cloud == nullptr || guidance.index == nullptr)) {
        throw ConfigError("rotation loss enabled without a dense point cloud");
    }
    const TrainView& view = views[static_cast<std::size_t>(state.iteration) % views.size()];

    RenderOptions ropt;
    ropt.background = config.background;
    const RenderResult rendered = render(state.gaussians, view.camera, ropt);
    const PhotometricLoss photo = photometric_loss(rendered.frame.color, view.image, config.lambda_dssim);
    require_finite(photo.value, "l_rgb", state.iteration);

    std::vector<Vec3> normals;
    if (guidance.cloud != nullptr && guidance.index != nullptr && !state.gaussians.empty()) {
        state.pairing = pair_gaussians(state.gaussians, *guidance.index);
        normals = paired_normals(state.pairing, *guidance.cloud);
    }

    const LossWeights weights = config.weights();
    LossBreakdown loss = total_loss(photo.value, state.gaussians, normals, weights);
    // Record both regularizers even when their weight is zero.
    loss.alpha = weights.alpha;
    loss.beta = weights.beta;
    require_finite(loss.l_thin, "l_thin", state.iteration);
    require_finite(loss.l_normal, "l_normal", state.iteration);
    require_finite(loss.total, "total", state.iteration);

    GradientSet grad = backward(rendered, state.gaussians, photo.gradient);
    grad = analytic_gradients(state.gaussians, need_normals ? std::span<const Vec3>(normals) : std::span<const Vec3>{},
                              grad, weights);

    const auto lr = learning_rates(config, state.iteration);
    const double t = state.iteration + 1.0;
    const double c1 = 1.0 - std::pow(kBeta1, t);
    const double c2 = 1.0 - std::pow(kBeta2, t);
    for (std::size_t i = 0; i < state.gaussians.size(); ++i) {
        const auto g = pack_gradient(grad[i]);
        auto p = pack_parameters(state.gaussians[i]);
        auto& m = state.first_moment[i];
        auto& v = state.second_moment[i];
        for (std::size_t k = 0; k < kParamsPerPrimitive; ++k) {
            m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * g[k];
            v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * g[k] * g[k];
            p[k] -= lr[k] * (m[k] / c1) / (std::sqrt(v[k] / c2) + kAdamEps);
        }
        unpack_parameters(p, state.gaussians[i]);
        auto& color = state.gaussians[i].color;
        for (int c = 0; c < 3; ++c) color[c] = std::clamp(color[c], 0.0, 1.0);
    }
    state.history.push_back({state.iteration, loss});
    ++state.iteration;
}

TrainResult run_training(const TrainConfig& config, const std::vector<TrainView>& views,
                         const DensePointCloud* cloud, const GaussianCloud* initial, const TrainOutputs& outputs) {
    config.validate();
    if (views.empty()) throw ConfigError("training needs at least one view");
    if ((config.enable_move || config.enable_rotate) && (cloud == nullptr || cloud->empty())) {
        throw ConfigError("movement or rotation guidance is enabled but no dense point cloud was given");
    }
    if (initial == nullptr && (cloud == nullptr || cloud->empty())) {
        throw ConfigError("no initial Gaussians and no dense point cloud to initialize from");
    }
    if (cloud != nullptr) cloud->validate();
    const auto start = std::chrono::steady_clock::now();

    std::optional<SpatialIndex> index;
    if (cloud != nullptr && !cloud->empty()) index.emplace(cloud->positions);
    Guidance guidance;
    if (index) guidance = {cloud, &*index};

    TrainState state(initial ? *initial
                             : init_from_cloud(*cloud, config.subsample, config.seed, config.init_opacity));
    for (int it = 0; it < config.iterations; ++it) {
        maybe_prune(state, config);
        if (index) maybe_snap(state, *index, config);
        train_step(state, views, config, guidance);
    }

    TrainResult result;
    result.gaussians = std::move(state.gaussians);
    result.history = std::move(state.history);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outputs.checkpoint) io::write_gaussians(*outputs.checkpoint, result.gaussians);
    if (outputs.loss_csv) write_loss_csv(*outputs.loss_csv, result.history);
    return result;
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<LossRecord>& history) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "iteration,l_rgb,l_thin,l_normal,total\n";
    for (const auto& r : history) {
        out << r.iteration << ',' << format_double(r.loss.l_rgb) << ',' << format_double(r.loss.l_thin) << ','
            << format_double(r.loss.l_normal) << ',' << format_double(r.loss.total) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

double median_min_scale(const GaussianCloud& gaussians) {
    if (gaussians.empty()) return 0.0;
    std::vector<double> v;
    v.reserve(gaussians.size());
    for (const auto& g : gaussians.primitives) v.push_back(loss_thin(g));
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace ggs
