// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "degfuse/joint.hpp"

namespace degfuse {

enum class FusionTask { ir_vis, medical };

std::string to_string(FusionTask task);
FusionTask parse_fusion_task(std::string_view text);

struct LossHyper {
    double lambda = 10.0;
    double gamma = 20.0;
    double phi = 10.0;
    FusionTask task = FusionTask::ir_vis;

    void validate() const;
};

struct LossBreakdown {
    double reconstruction = 0.0;
    /// Fusion intensity term (L1 against the elementwise max, or the summed L1 terms for medical).
    double fusion_intensity = 0.0;
    /// Gradient term for ir_vis (before gamma), summed 1 - SSIM for medical (before phi).
    double fusion_structure = 0.0;
    double fusion = 0.0;
    double total = 0.0;
};

/// All norms are per-pixel means. The xf block is scored against the labels only.
LossBreakdown loss_total(const JointState& pred, const ImagePlane& label1, const ImagePlane& label2,
                         const LossHyper& h);

/// Gradient of loss_total(...).total with respect to `pred`. Uses sign(0) = 0 and a
/// zero derivative of the Sobel magnitude where the magnitude vanishes.
JointState loss_gradient(const JointState& pred, const ImagePlane& label1, const ImagePlane& label2,
                         const LossHyper& h);

}  // namespace degfuse
