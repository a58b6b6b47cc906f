// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/eval_metrics.hpp"

#include "ggs/parallel.hpp"
#include "ggs/render.hpp"
#include "ggs/spatial_index.hpp"
#include "ggs/ssim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace ggs {

namespace {

double directed(const std::vector<Vec3>& from, const std::vector<Vec3>& to, ChamferVariant variant) {
    const SpatialIndex index(to);
    std::vector<double> d(from.size());
    parallel_for(from.size(), [&](std::size_t i) {
        const double d2 = index.nearest(from[i]).squared_distance;
        d[i] = variant == ChamferVariant::squared ? d2 : std::sqrt(d2);
    });
    // Fixed summation order keeps the result independent of threading.
    double sum = 0.0;
    for (double v : d) sum += v;
    return sum / static_cast<double>(from.size());
}

const char* variant_name(ChamferVariant v) { return v == ChamferVariant::squared ? "squared" : "l2"; }

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ChamferResult chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b, ChamferVariant variant) {
    if (a.empty() || b.empty()) throw InvalidInput("chamfer distance needs two non-empty point sets");
    return {directed(a, b, variant), directed(b, a, variant)};
}

double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b, ChamferVariant variant) {
    return chamfer(a, b, variant).total();
}

std::vector<Vec3> sample_surface(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed) {
    mesh.validate();
    std::vector<double> cumulative;
    cumulative.reserve(mesh.faces.size());
    double total = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
        total += 0.5 * (mesh.vertices[static_cast<std::size_t>(f[1])] - a)
                           .cross(mesh.vertices[static_cast<std::size_t>(f[2])] - a)
                           .norm();
        cumulative.push_back(total);
    }
    if (!(total > 0.0)) throw InvalidInput("cannot sample a mesh without surface area");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double pick = u(rng) * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        if (it == cumulative.end()) --it;
        const Face& f = mesh.faces[static_cast<std::size_t>(it - cumulative.begin())];
        const double s = std::sqrt(u(rng));
        const double t = u(rng);
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(f[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(f[2])];
        out.push_back((1.0 - s) * a + s * (1.0 - t) * b + s * t * c);
    }
    return out;
}

Psnr psnr(const Image& a, const Image& b) {
    if (!a.same_shape(b) || a.empty()) throw InvalidInput("PSNR needs two non-empty images of the same shape");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sum += d * d;
    }
    if (sum == 0.0) return {std::numeric_limits<double>::infinity(), true};
    const double mse = sum / static_cast<double>(a.data.size());
    return {10.0 * std::log10(1.0 / mse), false};
}

double image_ssim(const Image& a, const Image& b) { return ssim(a, b); }

void EvalReport::validate() const {
    auto check_ssim = [](double s) {
        if (!(s >= -1.0 && s <= 1.0)) throw InvalidInput("SSIM outside [-1, 1]");
    };
    auto check_psnr = [](const Psnr& p) {
        if (p.infinite != std::isinf(p.db) || (!p.infinite && !(p.db >= 0.0))) {
            throw InvalidInput("PSNR must be non-negative or flagged infinite");
        }
    };
    check_ssim(ssim);
    check_psnr(psnr);
    for (const auto& v : views) {
        check_ssim(v.ssim);
        check_psnr(v.psnr);
    }
    if (chamfer && !(*chamfer >= 0.0)) throw InvalidInput("negative chamfer distance");
}

bool EvalReport::same_values(const EvalReport& o) const {
    return views == o.views && ssim == o.ssim && psnr.db == o.psnr.db && psnr.infinite == o.psnr.infinite &&
           chamfer == o.chamfer && variant == o.variant && samples == o.samples;
}

EvalReport evaluate(const EvalInputs& in, const EvalOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    EvalReport report;
    report.variant = options.variant;
    if (in.gaussians != nullptr && !in.views.empty()) {
        RenderOptions ro;
        ro.background = options.background;
        double ssim_sum = 0.0, psnr_sum = 0.0;
        std::size_t finite = 0;
        for (const auto& v : in.views) {
            const RenderResult r = render(*in.gaussians, v.camera, ro);
            ViewMetrics m;
            m.id = v.id;
            m.ssim = image_ssim(r.frame.color, v.image);
            m.psnr = psnr(r.frame.color, v.image);
            ssim_sum += m.ssim;
            if (!m.psnr.infinite) {
                psnr_sum += m.psnr.db;
                ++finite;
            }
            report.views.push_back(m);
        }
        report.ssim = ssim_sum / static_cast<double>(in.views.size());
        report.psnr = finite == 0 ? Psnr{std::numeric_limits<double>::infinity(), true}
                                  : Psnr{psnr_sum / static_cast<double>(finite), false};
    }

    const bool has_reference = in.reference_mesh != nullptr || in.reference_points != nullptr;
    const bool has_prediction = in.mesh != nullptr || in.gaussians != nullptr;
    if (has_reference && has_prediction) {
        std::vector<Vec3> predicted;
        if (in.mesh != nullptr) {
            predicted = sample_surface(*in.mesh, options.samples, options.seed);
        } else {
            for (const auto& g : in.gaussians->primitives) predicted.push_back(g.position);
        }
        const std::vector<Vec3> reference = in.reference_points != nullptr
                                                ? *in.reference_points
                                                : sample_surface(*in.reference_mesh, options.samples, options.seed + 1);
        report.chamfer = chamfer_distance(predicted, reference, options.variant);
        report.samples = options.samples;
    }
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.validate();
    return report;
}

void write_report_csv(const std::filesystem::path& path, const EvalReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report " + path.string());
    out << "# ggs evaluation report\n"
        << "# chamfer variant " << variant_name(report.variant)
        << (report.variant == ChamferVariant::l2 ? ": mean unsquared nearest distance, summed over both directions\n"
                                                 : ": mean squared nearest distance, summed over both directions\n")
        << "# published reference values, NOT reproducible at desk scale (different data, renderer and "
           "hardware; LPIPS omitted): ssim 0.965, psnr 40.13, cd 0.564\n"
        << "# runtime is reported by the CLI manifest, not here\n"
        << "metric,view,value\n";
    for (const auto& v : report.views) {
        out << "ssim," << v.id << ',' << num(v.ssim) << '\n';
        out << "psnr," << v.id << ',' << num(v.psnr.db) << '\n';
    }
    out << "ssim,mean," << num(report.ssim) << '\n';
    out << "psnr,mean," << num(report.psnr.db) << '\n';
    if (report.chamfer) out << "chamfer,all," << num(*report.chamfer) << '\n';
    out << "samples,all," << report.samples << '\n';
    out << "variant,all," << variant_name(report.variant) << '\n';
    if (!out) throw IoError("failed writing report " + path.string());
}

EvalReport read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read report " + path.string());
    EvalReport r;
    std::string line;
    bool header = false;
    int line_no = 0;
    auto parse = [&](const std::string& s) {
        if (s == "inf") return std::numeric_limits<double>::infinity();
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
        }
    };
    auto view_slot = [&](int id) -> ViewMetrics& {
        for (auto& v : r.views)
            if (v.id == id) return v;
        r.views.push_back({});
        r.views.back().id = id;
        return r.views.back();
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "metric,view,value") throw IoError(path.string() + ": missing column header");
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string metric, view, value;
        if (!std::getline(ss, metric, ',') || !std::getline(ss, view, ',') || !std::getline(ss, value)) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected three fields");
        }
        if (metric == "variant") {
            r.variant = value == "squared" ? ChamferVariant::squared : ChamferVariant::l2;
        } else if (metric == "samples") {
            r.samples = static_cast<std::size_t>(parse(value));
        } else if (metric == "chamfer") {
            r.chamfer = parse(value);
        } else if (metric == "ssim" || metric == "psnr") {
            const double v = parse(value);
            if (view == "mean") {
                if (metric == "ssim") r.ssim = v;
                else r.psnr = {v, std::isinf(v)};
            } else {
                ViewMetrics& m = view_slot(static_cast<int>(parse(view)));
                if (metric == "ssim") m.ssim = v;
                else m.psnr = {v, std::isinf(v)};
            }
        } else {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": unknown metric '" + metric + "'");
        }
    }
    if (!header) throw IoError(path.string() + ": empty report");
    r.validate();
    return r;
}

std::string format_report(const EvalReport& r) {
    std::ostringstream out;
    out << "views: " << r.views.size() << "\n";
    if (!r.views.empty()) {
        out << "SSIM: " << num(r.ssim) << "\n";
        out << "PSNR: " << (r.psnr.infinite ? std::string("inf (identical)") : num(r.psnr.db) + " dB") << "\n";
    }
    if (r.chamfer) out << "CD (" << variant_name(r.variant) << ", " << r.samples << " samples): " << num(*r.chamfer) << "\n";
    out << "runtime: " << num(r.runtime_seconds) << " s\n";
    return out.str();
}

}  // namespace ggs
