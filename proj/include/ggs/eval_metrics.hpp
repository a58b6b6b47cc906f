// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// Chamfer distance, PSNR, SSIM and the evaluation report.
#pragma once

#include "ggs/gaussian.hpp"
#include "ggs/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ggs {

enum class ChamferVariant {
    l2,       // mean of unsquared nearest distances, summed over both directions
    squared,  // same with squared distances
};

struct ChamferResult {
    double a_to_b = 0.0;
    double b_to_a = 0.0;
    [[nodiscard]] double total() const { return a_to_b + b_to_a; }
};

/// Throws InvalidInput when either set is empty.
ChamferResult chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                      ChamferVariant variant = ChamferVariant::l2);
double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                        ChamferVariant variant = ChamferVariant::l2);

/// Area-weighted uniform samples on the surface, reproducible for a seed.
/// Throws InvalidInput on a mesh without area.
std::vector<Vec3> sample_surface(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed);

struct Psnr {
    double db = 0.0;
    bool infinite = false;  // identical images
};

/// 10 log10(1 / MSE) for images in [0, 1]. Throws InvalidInput on a shape mismatch.
Psnr psnr(const Image& a, const Image& b);

/// Mean local SSIM with an 11-pixel Gaussian window.
double image_ssim(const Image& a, const Image& b);

struct EvalView {
    int id = 0;
    CameraModel camera;
    Image image;
};

struct ViewMetrics {
    int id = 0;
    double ssim = 0.0;
    Psnr psnr;
    bool operator==(const ViewMetrics& o) const {
        return id == o.id && ssim == o.ssim && psnr.db == o.psnr.db && psnr.infinite == o.psnr.infinite;
    }
};

struct EvalReport {
    std::vector<ViewMetrics> views;
    double ssim = 0.0;  // mean over views
    Psnr psnr;          // mean over views; infinite only if every view is
    std::optional<double> chamfer;
    ChamferVariant variant = ChamferVariant::l2;
    std::size_t samples = 0;
    /// Wall time of evaluate(); kept out of the CSV so reruns serialize identically.
    double runtime_seconds = 0.0;

    /// Throws InvalidInput when a value leaves its documented range.
    void validate() const;
    /// Equality over the serialized fields.
    [[nodiscard]] bool same_values(const EvalReport& o) const;
};

struct EvalOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    ChamferVariant variant = ChamferVariant::l2;
    Vec3 background = Vec3::Zero();
};

struct EvalInputs {
    const GaussianCloud* gaussians = nullptr;  // rendered for every view when set
    std::vector<EvalView> views;
    /// Predicted surface; Gaussian centers stand in when absent.
    const TriangleMesh* mesh = nullptr;
    /// Ground truth, as a mesh (sampled) or points. Chamfer needs one of them.
    const TriangleMesh* reference_mesh = nullptr;
    const std::vector<Vec3>* reference_points = nullptr;
};

EvalReport evaluate(const EvalInputs& inputs, const EvalOptions& options = {});

/// CSV with a commented header; doubles printed with 17 significant digits.
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report_csv(const std::filesystem::path& path);
/// Human-readable summary, runtime included.
std::string format_report(const EvalReport& report);

}  // namespace ggs
