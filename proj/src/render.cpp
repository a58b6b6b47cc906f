// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/render.hpp"

#include "ggs/gaussian.hpp"
#include "ggs/parallel.hpp"
#include "ggs/ssim.hpp"

#include <algorithm>
#include <cmath>

namespace ggs {

ProjectedGaussian project_gaussian(const GaussianPrimitive& g, const CameraModel& cam, const RenderOptions& options) {
    ProjectedGaussian p;
    const Mat3 w = cam.world_to_camera_rotation();
    p.camera_point = w * g.position + cam.translation;
    p.depth = p.camera_point.z();
    if (!(p.depth > options.near_plane)) {
        return p;
    }
    const double tx = p.camera_point.x();
    const double ty = p.camera_point.y();
    const double tz = p.camera_point.z();
    p.mean = {cam.fx * tx / tz + cam.cx, cam.fy * ty / tz + cam.cy};

    p.jacobian << cam.fx / tz, 0.0, -cam.fx * tx / (tz * tz),
                  0.0, cam.fy / tz, -cam.fy * ty / (tz * tz);
    p.rotation = quat_to_rotation_matrix(g.rotation);
    p.squared_scales = (2.0 * g.log_scale).array().exp();
    const Mat3 sigma = p.rotation * p.squared_scales.asDiagonal() * p.rotation.transpose();
    p.camera_covariance = w * sigma * w.transpose();
    Mat2 cov = p.jacobian * p.camera_covariance * p.jacobian.transpose();
    cov(1, 0) = cov(0, 1);
    cov(0, 0) += options.covariance_floor;
    cov(1, 1) += options.covariance_floor;
    p.covariance = cov;
    const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(0, 1);
    if (!(det > 0.0)) {
        return p;
    }
    p.conic << cov(1, 1) / det, -cov(0, 1) / det, -cov(0, 1) / det, cov(0, 0) / det;
    p.opacity = g.opacity();

    const double mid = 0.5 * (cov(0, 0) + cov(1, 1));
    const double lambda_max = mid + std::sqrt(std::max(0.0, mid * mid - det));
    const double radius = options.sigma_cutoff * std::sqrt(lambda_max);
    // Pixel x is touched when |x + 0.5 - mean.x| <= radius.
    p.x_min = std::max(0, static_cast<int>(std::ceil(p.mean.x() - radius - 0.5)));
    p.x_max = std::min(cam.width - 1, static_cast<int>(std::floor(p.mean.x() + radius - 0.5)));
    p.y_min = std::max(0, static_cast<int>(std::ceil(p.mean.y() - radius - 0.5)));
    p.y_max = std::min(cam.height - 1, static_cast<int>(std::floor(p.mean.y() + radius - 0.5)));
    p.visible = p.x_min <= p.x_max && p.y_min <= p.y_max;
    return p;
}

namespace {

struct Contribution {
    int id;
    double alpha;
    double transmittance;  // before this splat
    double falloff;        // exp(power)
    Vec2 offset;           // pixel center minus splat mean
};

// Splat response at a pixel. Returns false when the splat is skipped.
bool evaluate(const ProjectedGaussian& p, const RenderOptions& o, double px, double py, double& falloff,
              double& alpha, Vec2& offset) {
    offset = {px - p.mean.x(), py - p.mean.y()};
    const double power = -0.5 * (p.conic(0, 0) * offset.x() * offset.x() +
                                 2.0 * p.conic(0, 1) * offset.x() * offset.y() +
                                 p.conic(1, 1) * offset.y() * offset.y());
    if (power > 0.0 || power < -0.5 * o.sigma_cutoff * o.sigma_cutoff) {
        return false;
    }
    falloff = std::exp(power);
    alpha = p.opacity * falloff;
    return alpha >= o.min_alpha;
}

// Front-to-back compositing for one pixel; fills `chain` when non-null.
void composite_pixel(const RenderResult& r, const GaussianCloud& gaussians, const std::vector<int>& list, int x,
                     int y, Vec3& color, double& depth_sum, double& weight_sum, double& transmittance,
                     std::vector<Contribution>* chain) {
    const double px = x + 0.5;
    const double py = y + 0.5;
    double t = 1.0;
    color.setZero();
    depth_sum = 0.0;
    weight_sum = 0.0;
    for (int id : list) {
        const ProjectedGaussian& p = r.projected[static_cast<std::size_t>(id)];
        if (x < p.x_min || x > p.x_max || y < p.y_min || y > p.y_max) {
            continue;
        }
        double falloff = 0.0, alpha = 0.0;
        Vec2 offset;
        if (!evaluate(p, r.options, px, py, falloff, alpha, offset)) {
            continue;
        }
        const double w = alpha * t;
        color += w * gaussians[static_cast<std::size_t>(id)].color;
        depth_sum += w * p.depth;
        weight_sum += w;
        if (chain != nullptr) {
            chain->push_back({id, alpha, t, falloff, offset});
        }
        t *= 1.0 - alpha;
    }
    transmittance = t;
}

}  // namespace

RenderResult render(const GaussianCloud& gaussians, const CameraModel& cam, const RenderOptions& options) {
    cam.validate();
    if (options.tile_size < 1) {
        throw InvalidInput("render: tile size must be positive");
    }
    RenderResult r;
    r.camera = cam;
    r.options = options;
    r.projected.resize(gaussians.size());
    parallel_for(gaussians.size(), [&](std::size_t i) {
        r.projected[i] = project_gaussian(gaussians[i], cam, options);
    });
    for (std::size_t i = 0; i < gaussians.size(); ++i) {
        if (r.projected[i].visible) {
            r.sorted.push_back(static_cast<int>(i));
        } else if (!(r.projected[i].depth > options.near_plane)) {
            ++r.culled;
        }
    }
    std::sort(r.sorted.begin(), r.sorted.end(), [&](int a, int b) {
        const double da = r.projected[static_cast<std::size_t>(a)].depth;
        const double db = r.projected[static_cast<std::size_t>(b)].depth;
        return da < db || (da == db && a < b);
    });

    const int ts = options.tile_size;
    r.tiles_x = (cam.width + ts - 1) / ts;
    r.tiles_y = (cam.height + ts - 1) / ts;
    r.tiles.assign(static_cast<std::size_t>(r.tiles_x * r.tiles_y), {});
    for (int id : r.sorted) {
        const ProjectedGaussian& p = r.projected[static_cast<std::size_t>(id)];
        for (int ty = p.y_min / ts; ty <= p.y_max / ts; ++ty) {
            for (int tx = p.x_min / ts; tx <= p.x_max / ts; ++tx) {
                r.tiles[static_cast<std::size_t>(ty * r.tiles_x + tx)].push_back(id);
            }
        }
    }

    RenderedFrame& f = r.frame;
    f.color = Image(cam.width, cam.height, 3);
    f.depth = Image(cam.width, cam.height, 1);
    f.alpha = Image(cam.width, cam.height, 1);
    f.transmittance = Image(cam.width, cam.height, 1);
    parallel_for(r.tiles.size(), [&](std::size_t tile) {
        const int tx = static_cast<int>(tile) % r.tiles_x;
        const int ty = static_cast<int>(tile) / r.tiles_x;
        const auto& list = r.tiles[tile];
        for (int y = ty * ts; y < std::min(cam.height, (ty + 1) * ts); ++y) {
            for (int x = tx * ts; x < std::min(cam.width, (tx + 1) * ts); ++x) {
                Vec3 c;
                double depth_sum = 0.0, weight_sum = 0.0, t = 1.0;
                composite_pixel(r, gaussians, list, x, y, c, depth_sum, weight_sum, t, nullptr);
                c += t * options.background;
                for (int k = 0; k < 3; ++k) {
                    f.color.at(x, y, k) = c[k];
                }
                f.alpha.at(x, y) = weight_sum;
                f.transmittance.at(x, y) = t;
                f.depth.at(x, y) = weight_sum > 0.0 ? depth_sum / weight_sum : 0.0;
            }
        }
    });
    return r;
}

namespace {

// Screen-space partials accumulated over pixels for one Gaussian.
struct ScreenGradient {
    Vec2 mean = Vec2::Zero();
    double conic00 = 0.0, conic01 = 0.0, conic11 = 0.0;
    double opacity = 0.0;
    Vec3 color = Vec3::Zero();

    void add(const ScreenGradient& o) {
        mean += o.mean;
        conic00 += o.conic00;
        conic01 += o.conic01;
        conic11 += o.conic11;
        opacity += o.opacity;
        color += o.color;
    }
};

PrimitiveGradient chain_to_parameters(const ScreenGradient& s, const ProjectedGaussian& p,
                                      const GaussianPrimitive& g, const CameraModel& cam) {
    PrimitiveGradient out;
    out.color = s.color;
    out.opacity_logit = s.opacity * p.opacity * (1.0 - p.opacity);

    // conic = cov^-1  =>  dL/dcov = -conic dL/dconic conic.
    Mat2 g_conic;
    g_conic << s.conic00, s.conic01, s.conic01, s.conic11;
    const Mat2 g_cov = -p.conic * g_conic * p.conic;

    const Eigen::Matrix<double, 2, 3>& j = p.jacobian;
    const Mat3 g_cam_cov = j.transpose() * g_cov * j;
    const Eigen::Matrix<double, 2, 3> g_j = 2.0 * g_cov * j * p.camera_covariance;

    const Mat3 w = cam.world_to_camera_rotation();
    const Mat3 g_sigma = w.transpose() * g_cam_cov * w;
    const Mat3 rt_g_r = p.rotation.transpose() * g_sigma * p.rotation;
    for (int k = 0; k < 3; ++k) {
        out.log_scale[k] = 2.0 * p.squared_scales[k] * rt_g_r(k, k);
    }
    const Mat3 g_rot = 2.0 * g_sigma * p.rotation * p.squared_scales.asDiagonal();
    out.rotation = quat_gradient_from_rotation(g.rotation, g_rot);

    const double tx = p.camera_point.x();
    const double ty = p.camera_point.y();
    const double tz = p.camera_point.z();
    const double fx = cam.fx, fy = cam.fy;
    const double tz2 = tz * tz;
    const double tz3 = tz2 * tz;
    Vec3 g_t;
    g_t.x() = s.mean.x() * fx / tz + g_j(0, 2) * (-fx / tz2);
    g_t.y() = s.mean.y() * fy / tz + g_j(1, 2) * (-fy / tz2);
    g_t.z() = s.mean.x() * (-fx * tx / tz2) + s.mean.y() * (-fy * ty / tz2) + g_j(0, 0) * (-fx / tz2) +
              g_j(0, 2) * (2.0 * fx * tx / tz3) + g_j(1, 1) * (-fy / tz2) + g_j(1, 2) * (2.0 * fy * ty / tz3);
    out.position = w.transpose() * g_t;
    return out;
}

}  // namespace

GradientSet backward(const RenderResult& r, const GaussianCloud& gaussians, const Image& d_color) {
    const CameraModel& cam = r.camera;
    if (d_color.width != cam.width || d_color.height != cam.height || d_color.channels != 3) {
        throw InvalidInput("backward: color gradient image does not match the rendered frame");
    }
    if (r.projected.size() != gaussians.size()) {
        throw InvalidInput("backward: Gaussian cloud differs from the rendered one");
    }
    const int ts = r.options.tile_size;
    const Vec3& bg = r.options.background;

    // Per-tile partial sums, merged below in tile order.
    std::vector<std::vector<ScreenGradient>> partial(r.tiles.size());
    parallel_for(r.tiles.size(), [&](std::size_t tile) {
        const auto& list = r.tiles[tile];
        auto& acc = partial[tile];
        acc.assign(list.size(), {});
        if (list.empty()) {
            return;
        }
        // Position of each Gaussian id within this tile's list.
        std::vector<std::pair<int, int>> slot(list.size());
        for (std::size_t k = 0; k < list.size(); ++k) {
            slot[k] = {list[k], static_cast<int>(k)};
        }
        std::sort(slot.begin(), slot.end());
        auto slot_of = [&](int id) {
            const auto it = std::lower_bound(slot.begin(), slot.end(), std::pair<int, int>{id, -1});
            return static_cast<std::size_t>(it->second);
        };

        const int tx = static_cast<int>(tile) % r.tiles_x;
        const int ty = static_cast<int>(tile) / r.tiles_x;
        std::vector<Contribution> chain;
        for (int y = ty * ts; y < std::min(cam.height, (ty + 1) * ts); ++y) {
            for (int x = tx * ts; x < std::min(cam.width, (tx + 1) * ts); ++x) {
                const Vec3 d_pixel{d_color.at(x, y, 0), d_color.at(x, y, 1), d_color.at(x, y, 2)};
                if (d_pixel.isZero()) {
                    continue;
                }
                chain.clear();
                Vec3 c;
                double depth_sum = 0.0, weight_sum = 0.0, t_final = 1.0;
                composite_pixel(r, gaussians, list, x, y, c, depth_sum, weight_sum, t_final, &chain);
                // `behind` is the color composited behind splat k, as seen
                // through splat k's hole.
                Vec3 behind = bg;
                for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
                    const Contribution& k = *it;
                    const Vec3& ck = gaussians[static_cast<std::size_t>(k.id)].color;
                    ScreenGradient& gk = acc[slot_of(k.id)];
                    gk.color += k.alpha * k.transmittance * d_pixel;
                    const double d_alpha = k.transmittance * (ck - behind).dot(d_pixel);
                    behind = k.alpha * ck + (1.0 - k.alpha) * behind;

                    const ProjectedGaussian& p = r.projected[static_cast<std::size_t>(k.id)];
                    gk.opacity += d_alpha * k.falloff;
                    const double d_power = d_alpha * k.alpha;
                    const Vec2& d = k.offset;
                    gk.mean += d_power * (p.conic * d);
                    gk.conic00 += d_power * (-0.5 * d.x() * d.x());
                    gk.conic01 += d_power * (-0.5 * d.x() * d.y());
                    gk.conic11 += d_power * (-0.5 * d.y() * d.y());
                }
            }
        }
    });

    std::vector<ScreenGradient> screen(gaussians.size());
    for (std::size_t tile = 0; tile < r.tiles.size(); ++tile) {
        const auto& list = r.tiles[tile];
        for (std::size_t k = 0; k < list.size(); ++k) {
            screen[static_cast<std::size_t>(list[k])].add(partial[tile][k]);
        }
    }

    GradientSet out(gaussians.size());
    parallel_for(gaussians.size(), [&](std::size_t i) {
        if (r.projected[i].visible) {
            out[i] = chain_to_parameters(screen[i], r.projected[i], gaussians[i], cam);
        }
    });
    return out;
}

PhotometricLoss photometric_loss(const Image& rendered, const Image& target, double lambda) {
    if (!rendered.same_shape(target)) {
        throw InvalidInput("photometric_loss: rendered and target images differ in shape");
    }
    if (rendered.empty()) {
        throw InvalidInput("photometric_loss: empty image");
    }
    PhotometricLoss out;
    if (rendered.data == target.data) {
        // Exact optimum: the true gradient is zero, which the SSIM
        // expression only reproduces up to rounding.
        out.gradient = Image(rendered.width, rendered.height, rendered.channels);
        return out;
    }
    const double n = static_cast<double>(rendered.data.size());
    Image ssim_grad;
    out.ssim = ssim(rendered, target, &ssim_grad);
    out.gradient = Image(rendered.width, rendered.height, rendered.channels);
    double l1 = 0.0;
    for (std::size_t i = 0; i < rendered.data.size(); ++i) {
        const double diff = rendered.data[i] - target.data[i];
        l1 += std::abs(diff);
        const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        out.gradient.data[i] = (1.0 - lambda) * sign / n - 0.5 * lambda * ssim_grad.data[i];
    }
    out.l1 = l1 / n;
    out.value = (1.0 - lambda) * out.l1 + lambda * 0.5 * (1.0 - out.ssim);
    return out;
}

}  // namespace ggs
