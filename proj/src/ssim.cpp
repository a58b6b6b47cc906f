// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/ssim.hpp"

#include <cmath>
#include <vector>

namespace ggs {
namespace {

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double x = i - c;
        k[static_cast<std::size_t>(i)] = std::exp(-(x * x) / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (double& v : k) {
        v /= sum;
    }
    return k;
}

// Zero-padded "same" correlation with a symmetric separable kernel, which is
// its own adjoint.
class Blur {
public:
    Blur(int w, int h, std::vector<double> kernel) : w_(w), h_(h), k_(std::move(kernel)), tmp_(std::size_t(w) * h) {}

    std::vector<double> operator()(const std::vector<double>& in) {
        const int r = static_cast<int>(k_.size()) / 2;
        std::vector<double> out(in.size(), 0.0);
        for (int y = 0; y < h_; ++y) {
            for (int x = 0; x < w_; ++x) {
                double s = 0.0;
                for (int t = -r; t <= r; ++t) {
                    const int xx = x + t;
                    if (xx >= 0 && xx < w_) {
                        s += k_[std::size_t(t + r)] * in[std::size_t(y) * w_ + xx];
                    }
                }
                tmp_[std::size_t(y) * w_ + x] = s;
            }
        }
        for (int y = 0; y < h_; ++y) {
            for (int x = 0; x < w_; ++x) {
                double s = 0.0;
                for (int t = -r; t <= r; ++t) {
                    const int yy = y + t;
                    if (yy >= 0 && yy < h_) {
                        s += k_[std::size_t(t + r)] * tmp_[std::size_t(yy) * w_ + x];
                    }
                }
                out[std::size_t(y) * w_ + x] = s;
            }
        }
        return out;
    }

private:
    int w_, h_;
    std::vector<double> k_;
    std::vector<double> tmp_;
};

}  // namespace

double ssim(const Image& a, const Image& b, Image* grad_a, const SsimParams& params) {
    if (!a.same_shape(b)) {
        throw InvalidInput("ssim: image shapes differ");
    }
    if (a.empty()) {
        throw InvalidInput("ssim: empty image");
    }
    if (params.window < 1 || params.window % 2 == 0) {
        throw InvalidInput("ssim: window must be a positive odd size");
    }
    const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
    const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
    const int w = a.width;
    const int h = a.height;
    const std::size_t npix = std::size_t(w) * h;
    const double inv_total = 1.0 / static_cast<double>(npix * a.channels);

    Blur blur(w, h, gaussian_kernel(params.window, params.sigma));
    if (grad_a != nullptr) {
        *grad_a = Image(w, h, a.channels);
    }

    double total = 0.0;
    std::vector<double> pa(npix), pb(npix), tmp(npix);
    for (int c = 0; c < a.channels; ++c) {
        for (std::size_t i = 0; i < npix; ++i) {
            pa[i] = a.data[i * a.channels + c];
            pb[i] = b.data[i * a.channels + c];
        }
        const auto mu_a = blur(pa);
        const auto mu_b = blur(pb);
        for (std::size_t i = 0; i < npix; ++i) tmp[i] = pa[i] * pa[i];
        const auto e_aa = blur(tmp);
        for (std::size_t i = 0; i < npix; ++i) tmp[i] = pb[i] * pb[i];
        const auto e_bb = blur(tmp);
        for (std::size_t i = 0; i < npix; ++i) tmp[i] = pa[i] * pb[i];
        const auto e_ab = blur(tmp);

        std::vector<double> g_mu, g_var, g_cov;
        if (grad_a != nullptr) {
            g_mu.resize(npix);
            g_var.resize(npix);
            g_cov.resize(npix);
        }
        for (std::size_t i = 0; i < npix; ++i) {
            const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
            const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
            const double cov = e_ab[i] - mu_a[i] * mu_b[i];
            const double n1 = 2.0 * mu_a[i] * mu_b[i] + c1;
            const double n2 = 2.0 * cov + c2;
            const double d1 = mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1;
            const double d2 = var_a + var_b + c2;
            const double s = (n1 * n2) / (d1 * d2);
            total += s;
            if (grad_a != nullptr) {
                const double ds_dmu = (2.0 * mu_b[i] * n2) / (d1 * d2) - s * 2.0 * mu_a[i] / d1;
                const double ds_dvar = -s / d2;
                const double ds_dcov = 2.0 * n1 / (d1 * d2);
                // var_a and cov depend on mu_a as well.
                g_var[i] = ds_dvar * inv_total;
                g_cov[i] = ds_dcov * inv_total;
                g_mu[i] = ds_dmu * inv_total - 2.0 * mu_a[i] * g_var[i] - mu_b[i] * g_cov[i];
            }
        }
        if (grad_a != nullptr) {
            const auto b_mu = blur(g_mu);
            const auto b_var = blur(g_var);
            const auto b_cov = blur(g_cov);
            for (std::size_t i = 0; i < npix; ++i) {
                grad_a->data[i * a.channels + c] = b_mu[i] + 2.0 * pa[i] * b_var[i] + pb[i] * b_cov[i];
            }
        }
    }
    return total / static_cast<double>(npix * a.channels);
}

}  // namespace ggs
