// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "degfuse/errors.hpp"
#include "degfuse/sobel.hpp"

namespace degfuse {

namespace {

struct WindowStats {
    double mu_a, mu_b, var_a, var_b, cov;
};

WindowStats window_stats(const ImagePlane& a, const ImagePlane& b, std::size_t r0, std::size_t c0) {
    constexpr double n = kSsimWindow * kSsimWindow;
    double sa = 0, sb = 0;
    for (std::size_t r = r0; r < r0 + kSsimWindow; ++r)
        for (std::size_t c = c0; c < c0 + kSsimWindow; ++c) {
            sa += a(r, c);
            sb += b(r, c);
        }
    const double mu_a = sa / n, mu_b = sb / n;
    // Centred second moments; cancels exactly for constant windows.
    double vaa = 0, vbb = 0, vab = 0;
    for (std::size_t r = r0; r < r0 + kSsimWindow; ++r)
        for (std::size_t c = c0; c < c0 + kSsimWindow; ++c) {
            const double da = a(r, c) - mu_a, db = b(r, c) - mu_b;
            vaa += da * da;
            vbb += db * db;
            vab += da * db;
        }
    return {mu_a, mu_b, vaa / n, vbb / n, vab / n};
}

void require_ssim_dims(const ImagePlane& a, const ImagePlane& b) {
    require_same_dims(a.dims(), b.dims(), "ssim");
    if (a.height() < kSsimWindow || a.width() < kSsimWindow) {
        throw std::invalid_argument("ssim: images must be at least 8x8, got " + to_string(a.dims()));
    }
}

std::size_t bin_of(double v) {
    const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    return std::min<std::size_t>(kHistogramBins - 1, static_cast<std::size_t>(c * kHistogramBins));
}

double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

struct EntropyTriple {
    double h_a, h_b, h_ab;
};

EntropyTriple joint_entropies(const ImagePlane& a, const ImagePlane& b) {
    require_same_dims(a.dims(), b.dims(), "mutual_information");
    std::vector<double> joint(kHistogramBins * kHistogramBins, 0.0), pa(kHistogramBins, 0.0), pb(kHistogramBins, 0.0);
    const double w = 1.0 / static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t ia = bin_of(a[i]), ib = bin_of(b[i]);
        joint[ia * kHistogramBins + ib] += w;
        pa[ia] += w;
        pb[ib] += w;
    }
    return {entropy_bits(pa), entropy_bits(pb), entropy_bits(joint)};
}

// Sigmoid model constants for edge strength (g) and orientation (a).
constexpr double kGammaG = 0.9994, kKappaG = 15.0, kSigmaG = 0.5;
constexpr double kGammaA = 0.9879, kKappaA = 22.0, kSigmaA = 0.8;

double orientation(double gx, double gy) {
    return gx == 0.0 ? std::numbers::pi / 2.0 : std::atan(gy / gx);
}

/// Per-pixel preservation Q^{SF} of source S's edges in F.
double preservation(double g_s, double a_s, double g_f, double a_f) {
    double strength = 0.0;
    if (g_s != 0.0 && g_f != 0.0) strength = g_s > g_f ? g_f / g_s : g_s / g_f;
    const double orient = 1.0 - std::abs(a_s - a_f) / (std::numbers::pi / 2.0);
    const double qg = kGammaG / (1.0 + std::exp(-kKappaG * (strength - kSigmaG)));
    const double qa = kGammaA / (1.0 + std::exp(-kKappaA * (orient - kSigmaA)));
    return qg * qa;
}

}  // namespace

double ssim(const ImagePlane& a, const ImagePlane& b) {
    require_ssim_dims(a, b);
    const std::size_t nr = a.height() - kSsimWindow + 1, nc = a.width() - kSsimWindow + 1;
    double total = 0.0;
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) {
            const WindowStats s = window_stats(a, b, r, c);
            const double num = (2 * s.mu_a * s.mu_b + kSsimC1) * (2 * s.cov + kSsimC2);
            const double den = (s.mu_a * s.mu_a + s.mu_b * s.mu_b + kSsimC1) * (s.var_a + s.var_b + kSsimC2);
            total += num / den;
        }
    return total / static_cast<double>(nr * nc);
}

ImagePlane ssim_gradient(const ImagePlane& a, const ImagePlane& b) {
    require_ssim_dims(a, b);
    constexpr double n = kSsimWindow * kSsimWindow;
    const std::size_t nr = a.height() - kSsimWindow + 1, nc = a.width() - kSsimWindow + 1;
    const double inv_windows = 1.0 / static_cast<double>(nr * nc);
    ImagePlane grad(a.dims());
    for (std::size_t r0 = 0; r0 < nr; ++r0)
        for (std::size_t c0 = 0; c0 < nc; ++c0) {
            const WindowStats s = window_stats(a, b, r0, c0);
            const double l_num = 2 * s.mu_a * s.mu_b + kSsimC1;
            const double cs_num = 2 * s.cov + kSsimC2;
            const double l_den = s.mu_a * s.mu_a + s.mu_b * s.mu_b + kSsimC1;
            const double cs_den = s.var_a + s.var_b + kSsimC2;
            const double value = (l_num * cs_num) / (l_den * cs_den);
            // d/da_i of log(value) split into the mean-driven and deviation-driven parts.
            const double d_mu = (2 * s.mu_b / l_num - 2 * s.mu_a / l_den) / n;
            for (std::size_t r = r0; r < r0 + kSsimWindow; ++r)
                for (std::size_t c = c0; c < c0 + kSsimWindow; ++c) {
                    const double da = a(r, c) - s.mu_a, db = b(r, c) - s.mu_b;
                    const double d_dev = (2 * db / cs_num - 2 * da / cs_den) / n;
                    grad(r, c) += value * (d_mu + d_dev) * inv_windows;
                }
        }
    return grad;
}

double entropy(const ImagePlane& a) {
    std::vector<double> p(kHistogramBins, 0.0);
    const double w = 1.0 / static_cast<double>(a.size());
    for (double v : a.values()) p[bin_of(v)] += w;
    return entropy_bits(p);
}

double mutual_information(const ImagePlane& a, const ImagePlane& b) {
    const EntropyTriple e = joint_entropies(a, b);
    return e.h_a + e.h_b - e.h_ab;
}

MiScore q_mi_detailed(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused) {
    require_same_dims(src1.dims(), fused.dims(), "q_mi");
    require_same_dims(src2.dims(), fused.dims(), "q_mi");
    MiScore score;
    for (const ImagePlane* src : {&src1, &src2}) {
        const EntropyTriple e = joint_entropies(fused, *src);
        const double denom = e.h_a + e.h_b;
        if (denom <= 0.0) {
            score.degenerate = true;
            continue;
        }
        score.value += 2.0 * (e.h_a + e.h_b - e.h_ab) / denom;
    }
    return score;
}

double q_mi(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused) {
    return q_mi_detailed(src1, src2, fused).value;
}

double q_abf(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused) {
    require_same_dims(src1.dims(), fused.dims(), "q_abf");
    require_same_dims(src2.dims(), fused.dims(), "q_abf");
    const Gradient ga = sobel_gradient(src1), gb = sobel_gradient(src2), gf = sobel_gradient(fused);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < fused.size(); ++i) {
        const double af = orientation(gf.gx[i], gf.gy[i]);
        const double wa = ga.magnitude[i], wb = gb.magnitude[i];
        const double qa = preservation(wa, orientation(ga.gx[i], ga.gy[i]), gf.magnitude[i], af);
        const double qb = preservation(wb, orientation(gb.gx[i], gb.gy[i]), gf.magnitude[i], af);
        num += qa * wa + qb * wb;
        den += wa + wb;
    }
    if (den <= 0.0) return 0.0;
    return std::clamp(num / den, 0.0, 1.0);
}

MetricReport evaluate_fusion(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused) {
    MetricReport r;
    r.q_mi = q_mi(src1, src2, fused);
    r.q_abf = q_abf(src1, src2, fused);
    r.ssim_src1 = ssim(fused, src1);
    r.ssim_src2 = ssim(fused, src2);
    return r;
}

}  // namespace degfuse
