// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "degfuse/image.hpp"

namespace degfuse {

inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;
inline constexpr std::size_t kSsimWindow = 8;
inline constexpr std::size_t kHistogramBins = 64;

/// Mean SSIM over every 8x8 window (stride 1, no padding). Window statistics
/// use population (1/N) moments.
double ssim(const ImagePlane& a, const ImagePlane& b);

/// d ssim(a, b) / d a.
ImagePlane ssim_gradient(const ImagePlane& a, const ImagePlane& b);

struct MiScore {
    double value = 0.0;
    /// Set when some H(F) + H(src) vanished and its term was taken as 0.
    bool degenerate = false;
};

/// Mutual information in bits from a 64-bin joint histogram of [0,1]-clamped intensities.
double mutual_information(const ImagePlane& a, const ImagePlane& b);
double entropy(const ImagePlane& a);

/// 2 * [MI(F,A)/(H(F)+H(A)) + MI(F,B)/(H(F)+H(B))].
MiScore q_mi_detailed(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused);
double q_mi(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused);

/// Xydeas-Petrovic edge preservation score in [0,1].
double q_abf(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused);

struct MetricReport {
    double q_mi = 0.0;
    double q_abf = 0.0;
    double ssim_src1 = 0.0;
    double ssim_src2 = 0.0;

    double ssim() const { return 0.5 * (ssim_src1 + ssim_src2); }
};

MetricReport evaluate_fusion(const ImagePlane& src1, const ImagePlane& src2, const ImagePlane& fused);

}  // namespace degfuse
