// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/fastmvs.hpp"

#include "ggs/parallel.hpp"
#include "ggs/spatial_index.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace ggs {
namespace {

constexpr double kNccVarianceFloor = 1e-8;

// Summed-area table with a zero guard row and column.
class Integral {
public:
    Integral(int w, int h) : w_(w), h_(h), s_(static_cast<std::size_t>(w + 1) * (h + 1), 0.0) {}

    template <class F>
    void build(F value) {
        for (int y = 0; y < h_; ++y) {
            double row = 0.0;
            for (int x = 0; x < w_; ++x) {
                row += value(x, y);
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }
    // Sum over [x0, x1] x [y0, y1], inclusive.
    [[nodiscard]] double box(int x0, int y0, int x1, int y1) const {
        return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
    }

private:
    double& at(int x, int y) { return s_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    [[nodiscard]] double at(int x, int y) const { return s_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    int w_, h_;
    std::vector<double> s_;
};

// Bilinear lookup at continuous pixel coordinates (centers at +0.5); false
// outside the sampled area.
bool bilinear(const Image& img, const Vec2& uv, double& out) {
    const double x = uv.x() - 0.5;
    const double y = uv.y() - 0.5;
    if (!(x >= 0.0 && y >= 0.0 && x <= img.width - 1 && y <= img.height - 1)) return false;
    const int x0 = std::min(static_cast<int>(x), img.width - 2 < 0 ? 0 : img.width - 2);
    const int y0 = std::min(static_cast<int>(y), img.height - 2 < 0 ? 0 : img.height - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double top = img.at(x0, y0) * (1 - fx) + img.at(x1, y0) * fx;
    const double bot = img.at(x0, y1) * (1 - fx) + img.at(x1, y1) * fx;
    out = top * (1 - fy) + bot * fy;
    return true;
}

Vec3 world_point(const CameraModel& cam, int x, int y, double depth) {
    return cam.to_world(cam.unproject({x + 0.5, y + 0.5}, depth));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void MvsConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (downsample < 1) fail("downsample must be >= 1");
    if (planes < 2) fail("plane count must be >= 2");
    if (has_depth_range() && !(depth_min > 0.0 && depth_max > depth_min))
        fail("depth range needs 0 < depth_min < depth_max");
    if (window < 3 || window % 2 == 0) fail("NCC window must be odd and >= 3");
    if (neighbors < 1) fail("neighbor count must be >= 1");
    if (min_consistent < 1) fail("consistency min views must be >= 1");
    if (!(reprojection_tolerance > 0.0) || !(depth_tolerance > 0.0)) fail("consistency tolerances must be > 0");
    if (consistency_iterations < 0) fail("consistency iterations must be >= 0");
    if (normal_neighbors < 3) fail("normal neighbor count must be >= 3");
}

WorkingView prepare_view(const MvsView& view, int factor) {
    view.camera.validate();
    if (view.image.width != view.camera.width || view.image.height != view.camera.height)
        throw InvalidInput("view " + std::to_string(view.id) + ": image is " + std::to_string(view.image.width) + "x" +
                           std::to_string(view.image.height) + " but the camera expects " +
                           std::to_string(view.camera.width) + "x" + std::to_string(view.camera.height));
    WorkingView out;
    out.id = view.id;
    out.camera = view.camera.downsampled(factor);
    const int w = out.camera.width;
    const int h = out.camera.height;
    if (w < 1 || h < 1) throw InvalidInput("downsample factor leaves an empty image for view " + std::to_string(view.id));
    out.gray = Image(w, h, 1);
    const double norm = 1.0 / (static_cast<double>(factor) * factor * view.image.channels);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int dy = 0; dy < factor; ++dy)
                for (int dx = 0; dx < factor; ++dx)
                    for (int c = 0; c < view.image.channels; ++c) s += view.image.at(x * factor + dx, y * factor + dy, c);
            out.gray.at(x, y) = s * norm;
        }
    return out;
}

double inverse_depth_step(double depth_min, double depth_max, int planes) {
    return (1.0 / depth_min - 1.0 / depth_max) / (planes - 1);
}

std::vector<double> depth_hypotheses(double depth_min, double depth_max, int planes) {
    const double step = inverse_depth_step(depth_min, depth_max, planes);
    std::vector<double> d(static_cast<std::size_t>(planes));
    for (int j = 0; j < planes; ++j) d[static_cast<std::size_t>(j)] = 1.0 / (1.0 / depth_max + j * step);
    d.back() = depth_min;
    return d;
}

std::pair<double, double> auto_depth_range(const std::vector<CameraModel>& cameras) {
    Mat3 a = Mat3::Zero();
    Vec3 b = Vec3::Zero();
    for (const auto& c : cameras) {
        const Vec3 d = c.view_direction();
        const Mat3 p = Mat3::Identity() - d * d.transpose();
        a += p;
        b += p * c.center();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(a);
    if (cameras.size() < 2 || es.eigenvalues()[0] < 1e-3 * static_cast<double>(cameras.size())) {
        throw ConfigError("cannot infer a depth range: camera axes do not converge; pass --depth-min/--depth-max");
    }
    const Vec3 target = a.ldlt().solve(b);
    double far = 0.0;
    for (const auto& c : cameras) {
        if (c.to_camera(target).z() <= 0.0)
            throw ConfigError("cannot infer a depth range: the rig's convergence point is behind a camera");
        far = std::max(far, (c.center() - target).norm());
    }
    return {0.5 * far, 1.5 * far};
}

std::vector<int> select_neighbors(const std::vector<CameraModel>& cameras, int ref, int count) {
    const Vec3 axis = cameras[static_cast<std::size_t>(ref)].view_direction();
    std::vector<std::pair<double, int>> cand;
    for (int i = 0; i < static_cast<int>(cameras.size()); ++i) {
        if (i == ref) continue;
        const double c = std::clamp(axis.dot(cameras[static_cast<std::size_t>(i)].view_direction()), -1.0, 1.0);
        cand.push_back({std::acos(c), i});
    }
    std::sort(cand.begin(), cand.end());
    std::vector<int> out;
    for (int i = 0; i < std::min<int>(count, static_cast<int>(cand.size())); ++i) out.push_back(cand[static_cast<std::size_t>(i)].second);
    return out;
}

DepthMap estimate_depth(const WorkingView& ref, const std::vector<const WorkingView*>& neighbors,
                        const MvsConfig& config) {
    config.validate();
    if (!config.has_depth_range()) throw ConfigError("estimate_depth needs an explicit depth range");
    if (neighbors.empty()) throw InvalidInput("view " + std::to_string(ref.id) + " has no neighbor views");
    const double scale = std::max(1.0, ref.camera.center().norm());
    for (const auto* n : neighbors) {
        if ((n->camera.center() - ref.camera.center()).norm() <= 1e-9 * scale) {
            throw InvalidInput("degenerate baseline between views " + std::to_string(ref.id) + " and " +
                               std::to_string(n->id) + ": identical camera centers");
        }
    }
    const int w = ref.camera.width;
    const int h = ref.camera.height;
    const int r = config.window / 2;
    const double n_win = static_cast<double>(config.window) * config.window;
    const auto depths = depth_hypotheses(config.depth_min, config.depth_max, config.planes);

    Integral ref_sum(w, h), ref_sq(w, h);
    ref_sum.build([&](int x, int y) { return ref.gray.at(x, y); });
    ref_sq.build([&](int x, int y) { return ref.gray.at(x, y) * ref.gray.at(x, y); });

    const std::size_t npix = static_cast<std::size_t>(w) * h;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // Mean NCC per (plane, pixel); NaN where no neighbor could score.
    std::vector<double> scores(depths.size() * npix, nan);
    std::vector<double> score_sum(npix), warped(npix);
    std::vector<int> score_count(npix);
    std::vector<unsigned char> valid(npix);

    for (std::size_t j = 0; j < depths.size(); ++j) {
        const double d = depths[j];
        std::fill(score_sum.begin(), score_sum.end(), 0.0);
        std::fill(score_count.begin(), score_count.end(), 0);
        for (const WorkingView* nb : neighbors) {
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const std::size_t i = static_cast<std::size_t>(y) * w + x;
                    const Vec3 pc = nb->camera.to_camera(world_point(ref.camera, x, y, d));
                    double v = 0.0;
                    valid[i] = pc.z() > 1e-9 && bilinear(nb->gray, nb->camera.project_camera(pc), v);
                    warped[i] = valid[i] ? v : 0.0;
                }
            Integral s(w, h), sq(w, h), cross(w, h), cnt(w, h);
            s.build([&](int x, int y) { return warped[static_cast<std::size_t>(y) * w + x]; });
            sq.build([&](int x, int y) {
                const double v = warped[static_cast<std::size_t>(y) * w + x];
                return v * v;
            });
            cross.build([&](int x, int y) {
                return warped[static_cast<std::size_t>(y) * w + x] * ref.gray.at(x, y);
            });
            cnt.build([&](int x, int y) { return static_cast<double>(valid[static_cast<std::size_t>(y) * w + x]); });
            for (int y = r; y + r < h; ++y)
                for (int x = r; x + r < w; ++x) {
                    if (cnt.box(x - r, y - r, x + r, y + r) < n_win) continue;
                    const double sa = ref_sum.box(x - r, y - r, x + r, y + r);
                    const double sb = s.box(x - r, y - r, x + r, y + r);
                    const double ma = sa / n_win;
                    const double mb = sb / n_win;
                    const double va = std::max(ref_sq.box(x - r, y - r, x + r, y + r) / n_win - ma * ma, kNccVarianceFloor);
                    const double vb = std::max(sq.box(x - r, y - r, x + r, y + r) / n_win - mb * mb, kNccVarianceFloor);
                    const double cov = cross.box(x - r, y - r, x + r, y + r) / n_win - ma * mb;
                    const std::size_t i = static_cast<std::size_t>(y) * w + x;
                    score_sum[i] += cov / std::sqrt(va * vb);
                    ++score_count[i];
                }
        }
        for (std::size_t i = 0; i < npix; ++i) {
            if (score_count[i] > 0) scores[j * npix + i] = score_sum[i] / score_count[i];
        }
    }

    const double step = inverse_depth_step(config.depth_min, config.depth_max, config.planes);
    DepthMap out(ref.id, w, h);
    for (std::size_t i = 0; i < npix; ++i) {
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < depths.size(); ++j) {
            const double sc = scores[j * npix + i];
            if (sc > best_score) {
                best_score = sc;
                best = j;
            }
        }
        if (!(best_score >= config.min_ncc)) continue;
        // A peak on the first or last plane is not bracketed: the surface
        // probably lies outside the search range.
        if (depths.size() >= 3 && (best == 0 || best + 1 == depths.size())) continue;
        double inv = 1.0 / depths[best];
        if (config.subplane_refinement && best > 0 && best + 1 < depths.size()) {
            // Parabola through the peak and its two neighbors, in inverse depth.
            const double a = scores[(best - 1) * npix + i];
            const double c = scores[(best + 1) * npix + i];
            const double curvature = a - 2.0 * best_score + c;
            if (std::isfinite(a) && std::isfinite(c) && curvature < 0.0) {
                inv += std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5) * step;
            }
        }
        out.depth[i] = 1.0 / inv;
    }
    return out;
}

DepthMap estimate_depth(const MvsView& ref, const std::vector<const MvsView*>& neighbors, const MvsConfig& config) {
    const WorkingView r = prepare_view(ref, config.downsample);
    std::vector<WorkingView> nb;
    nb.reserve(neighbors.size());
    for (const auto* n : neighbors) nb.push_back(prepare_view(*n, config.downsample));
    std::vector<const WorkingView*> ptrs;
    for (const auto& n : nb) ptrs.push_back(&n);
    return estimate_depth(r, ptrs, config);
}

std::vector<DepthMap> consistency_filter(const std::vector<DepthMap>& maps, const std::vector<CameraModel>& cameras,
                                         const MvsConfig& config, std::vector<std::string>* warnings) {
    config.validate();
    if (maps.size() != cameras.size()) throw InvalidInput("consistency_filter: one camera per depth map required");
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].width != cameras[i].width || maps[i].height != cameras[i].height)
            throw InvalidInput("consistency_filter: depth map " + std::to_string(i) + " does not match its camera");
    }
    if (static_cast<int>(maps.size()) - 1 < config.min_consistent && warnings != nullptr) {
        warnings->push_back("consistency filter: " + std::to_string(maps.size()) + " view(s) cannot reach " +
                            std::to_string(config.min_consistent) + " consistent neighbors; every pixel is dropped");
    }
    std::vector<DepthMap> current = maps;
    for (int pass = 0; pass < config.consistency_iterations; ++pass) {
        std::vector<DepthMap> next = current;
        parallel_for(current.size(), [&](std::size_t i) {
            const CameraModel& ci = cameras[i];
            DepthMap& out = next[i];
            for (int y = 0; y < out.height; ++y)
                for (int x = 0; x < out.width; ++x) {
                    const double d = current[i].at(x, y);
                    if (d <= 0.0) continue;
                    const Vec3 p = world_point(ci, x, y, d);
                    int agree = 0;
                    for (std::size_t j = 0; j < current.size() && agree < config.min_consistent; ++j) {
                        if (j == i) continue;
                        const CameraModel& cj = cameras[j];
                        const Vec3 pj = cj.to_camera(p);
                        if (pj.z() <= 0.0) continue;
                        const Vec2 uv = cj.project_camera(pj);
                        const int u = static_cast<int>(std::floor(uv.x()));
                        const int v = static_cast<int>(std::floor(uv.y()));
                        if (u < 0 || v < 0 || u >= cj.width || v >= cj.height) continue;
                        const double dj = current[j].at(u, v);
                        if (dj <= 0.0) continue;
                        const Vec3 back = ci.to_camera(world_point(cj, u, v, dj));
                        if (back.z() <= 0.0) continue;
                        const Vec2 uv_back = ci.project_camera(back);
                        const double px_err = (uv_back - Vec2{x + 0.5, y + 0.5}).norm();
                        const double depth_err = std::abs(back.z() - d) / d;
                        if (px_err <= config.reprojection_tolerance && depth_err <= config.depth_tolerance) ++agree;
                    }
                    if (agree < config.min_consistent) out.at(x, y) = 0.0;
                }
        });
        current = std::move(next);
    }
    return current;
}

namespace {

struct RawPoint {
    Vec3 position;
    int view;
    int x, y;
};

struct VoxelKey {
    long long x, y, z;
    bool operator==(const VoxelKey&) const = default;
};

struct VoxelHash {
    std::size_t operator()(const VoxelKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
        h ^= static_cast<std::size_t>(k.y) * 19349663u;
        h ^= static_cast<std::size_t>(k.z) * 83492791u;
        return h;
    }
};

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

}  // namespace

DensePointCloud fuse(const std::vector<DepthMap>& maps, const std::vector<CameraModel>& cameras,
                     const MvsConfig& config, FusionStats* stats, std::vector<int>* source_view) {
    if (maps.size() != cameras.size()) throw InvalidInput("fuse: one camera per depth map required");
    std::vector<RawPoint> raw;
    std::vector<double> footprint;
    for (std::size_t v = 0; v < maps.size(); ++v) {
        const DepthMap& m = maps[v];
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x) {
                const double d = m.at(x, y);
                if (d <= 0.0) continue;
                raw.push_back({world_point(cameras[v], x, y, d), static_cast<int>(v), x, y});
                footprint.push_back(d / std::sqrt(cameras[v].fx * cameras[v].fy));
            }
    }
    if (raw.empty()) {
        throw Error("fusion produced no points; relax the consistency tolerances or lower the minimum view count");
    }
    const double voxel = median(footprint);

    // Group by voxel; groups are ordered by their first contributor, so the
    // output order follows (view, row, column).
    std::unordered_map<VoxelKey, std::size_t, VoxelHash> slot;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const Vec3& p = raw[i].position;
        const VoxelKey key{static_cast<long long>(std::floor(p.x() / voxel)),
                           static_cast<long long>(std::floor(p.y() / voxel)),
                           static_cast<long long>(std::floor(p.z() / voxel))};
        auto [it, inserted] = slot.try_emplace(key, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
    }

    DensePointCloud cloud;
    std::vector<int> source;
    std::vector<Vec2> source_pixel;
    std::size_t fallbacks = 0;
    cloud.positions.reserve(groups.size());
    for (const auto& g : groups) {
        Vec3 mean = Vec3::Zero();
        for (auto i : g) mean += raw[i].position;
        mean /= static_cast<double>(g.size());
        // Representative: the contributor closest to the mean.
        std::size_t rep = g.front();
        double best = std::numeric_limits<double>::infinity();
        for (auto i : g) {
            const double d2 = squared_distance(raw[i].position, mean);
            if (d2 < best) {
                best = d2;
                rep = i;
            }
        }
        const RawPoint& rp = raw[rep];
        const CameraModel& cam = cameras[static_cast<std::size_t>(rp.view)];
        const Vec3 pc = cam.to_camera(mean);
        const bool ok = pc.z() > 0.0 &&
                        (cam.project_camera(pc) - Vec2{rp.x + 0.5, rp.y + 0.5}).norm() <= config.reprojection_tolerance;
        if (!ok) ++fallbacks;
        cloud.positions.push_back(ok ? mean : rp.position);
        source.push_back(rp.view);
        source_pixel.push_back({rp.x + 0.5, rp.y + 0.5});
    }

    // Normals: smallest principal axis of the local neighborhood.
    const SpatialIndex index(cloud.positions);
    cloud.normals.resize(cloud.size());
    parallel_for(cloud.size(), [&](std::size_t i) {
        const Vec3& p = cloud.positions[i];
        const Vec3 to_camera = cameras[static_cast<std::size_t>(source[i])].center() - p;
        Vec3 n = to_camera.normalized();
        const auto nb = index.knn(p, config.normal_neighbors);
        if (nb.size() >= 3) {
            Vec3 c = Vec3::Zero();
            for (const auto& b : nb) c += cloud.positions[static_cast<std::size_t>(b.index)];
            c /= static_cast<double>(nb.size());
            Mat3 cov = Mat3::Zero();
            for (const auto& b : nb) {
                const Vec3 d = cloud.positions[static_cast<std::size_t>(b.index)] - c;
                cov += d * d.transpose();
            }
            Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
            const Vec3 e = es.eigenvectors().col(0);
            if (e.allFinite() && e.norm() > 0.5) n = e.normalized();
        }
        if (n.dot(to_camera) < 0.0) n = -n;
        cloud.normals[i] = n;
    });

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const CameraModel& cam = cameras[static_cast<std::size_t>(source[i])];
        const Vec3 pc = cam.to_camera(cloud.positions[i]);
        if (pc.z() <= 0.0 || (cam.project_camera(pc) - source_pixel[i]).norm() > config.reprojection_tolerance + 1e-9) {
            throw Error("fused point " + std::to_string(i) + " does not reproject onto its source pixel");
        }
    }
    if (stats != nullptr) {
        stats->input_points = raw.size();
        stats->fused_points = cloud.size();
        stats->voxel_size = voxel;
        stats->fallback_points = fallbacks;
    }
    if (source_view != nullptr) *source_view = std::move(source);
    return cloud;
}

MvsResult reconstruct(const std::vector<MvsView>& views, const MvsConfig& config) {
    config.validate();
    if (views.size() < 2) throw InvalidInput("reconstruction needs at least two views");
    MvsResult result;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<WorkingView> work(views.size());
    parallel_for(views.size(), [&](std::size_t i) { work[i] = prepare_view(views[i], config.downsample); });
    for (const auto& w : work) result.working_cameras.push_back(w.camera);
    MvsConfig cfg = config;
    if (!cfg.has_depth_range()) {
        std::vector<CameraModel> full;
        for (const auto& v : views) full.push_back(v.camera);
        std::tie(cfg.depth_min, cfg.depth_max) = auto_depth_range(full);
    }
    result.depth_min = cfg.depth_min;
    result.depth_max = cfg.depth_max;
    result.timings.push_back({"prepare", seconds_since(t0)});

    t0 = std::chrono::steady_clock::now();
    result.raw_depths.resize(views.size());
    parallel_for(views.size(), [&](std::size_t i) {
        const auto nb_idx = select_neighbors(result.working_cameras, static_cast<int>(i), cfg.neighbors);
        std::vector<const WorkingView*> nb;
        for (int j : nb_idx) nb.push_back(&work[static_cast<std::size_t>(j)]);
        result.raw_depths[i] = estimate_depth(work[i], nb, cfg);
    });
    result.timings.push_back({"depth", seconds_since(t0)});

    t0 = std::chrono::steady_clock::now();
    result.filtered_depths = consistency_filter(result.raw_depths, result.working_cameras, cfg, &result.warnings);
    result.timings.push_back({"filter", seconds_since(t0)});

    t0 = std::chrono::steady_clock::now();
    result.cloud = fuse(result.filtered_depths, result.working_cameras, cfg, &result.fusion, &result.source_view);
    result.timings.push_back({"fuse", seconds_since(t0)});
    return result;
}

}  // namespace ggs
