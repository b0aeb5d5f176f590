// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degfuse/metrics.hpp"
#include "degfuse/sobel.hpp"

namespace degfuse {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double mean_abs_diff(const ImagePlane& a, const ImagePlane& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}

ImagePlane elementwise_max(const ImagePlane& a, const ImagePlane& b) {
    ImagePlane out(a.dims());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

/// Adds scale * sign(a - b) into g.
void add_sign(ImagePlane& g, const ImagePlane& a, const ImagePlane& b, double scale) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * sign(a[i] - b[i]);
}

void check_dims(const JointState& pred, const ImagePlane& label1, const ImagePlane& label2) {
    pred.validate();
    require_same_dims(pred.dims(), label1.dims(), "loss: label1");
    require_same_dims(pred.dims(), label2.dims(), "loss: label2");
}

}  // namespace

std::string to_string(FusionTask task) { return task == FusionTask::ir_vis ? "ir_vis" : "medical"; }

FusionTask parse_fusion_task(std::string_view text) {
    if (text == "ir_vis") return FusionTask::ir_vis;
    if (text == "medical") return FusionTask::medical;
    throw std::invalid_argument("unknown fusion task '" + std::string(text) + "' (expected ir_vis or medical)");
}

void LossHyper::validate() const {
    if (!(lambda >= 0.0) || !(gamma >= 0.0) || !(phi >= 0.0)) {
        throw std::invalid_argument("LossHyper: lambda, gamma and phi must be non-negative");
    }
}

LossBreakdown loss_total(const JointState& pred, const ImagePlane& label1, const ImagePlane& label2,
                         const LossHyper& h) {
    check_dims(pred, label1, label2);
    h.validate();
    LossBreakdown out;
    out.reconstruction = mean_abs_diff(pred.x1, label1) + mean_abs_diff(pred.x2, label2);
    if (h.task == FusionTask::ir_vis) {
        out.fusion_intensity = mean_abs_diff(pred.xf, elementwise_max(label1, label2));
        const ImagePlane target = elementwise_max(sobel_gradient(label1).magnitude, sobel_gradient(label2).magnitude);
        out.fusion_structure = mean_abs_diff(sobel_gradient(pred.xf).magnitude, target);
        out.fusion = out.fusion_intensity + h.gamma * out.fusion_structure;
    } else {
        out.fusion_intensity = mean_abs_diff(pred.xf, label1) + mean_abs_diff(pred.xf, label2);
        out.fusion_structure = (1.0 - ssim(pred.xf, label1)) + (1.0 - ssim(pred.xf, label2));
        out.fusion = out.fusion_intensity + h.phi * out.fusion_structure;
    }
    out.total = out.reconstruction + h.lambda * out.fusion;
    return out;
}

JointState loss_gradient(const JointState& pred, const ImagePlane& label1, const ImagePlane& label2,
                         const LossHyper& h) {
    check_dims(pred, label1, label2);
    h.validate();
    const Dims d = pred.dims();
    const double inv_n = 1.0 / static_cast<double>(d.count());
    JointState g{ImagePlane(d), ImagePlane(d), ImagePlane(d)};
    add_sign(g.x1, pred.x1, label1, inv_n);
    add_sign(g.x2, pred.x2, label2, inv_n);

    if (h.task == FusionTask::ir_vis) {
        add_sign(g.xf, pred.xf, elementwise_max(label1, label2), h.lambda * inv_n);
        const Gradient gf = sobel_gradient(pred.xf);
        const ImagePlane target = elementwise_max(sobel_gradient(label1).magnitude, sobel_gradient(label2).magnitude);
        ImagePlane dgx(d), dgy(d);
        const double scale = h.lambda * h.gamma * inv_n;
        for (std::size_t i = 0; i < d.count(); ++i) {
            const double mag = gf.magnitude[i];
            if (mag == 0.0) continue;
            const double gm = scale * sign(mag - target[i]);
            dgx[i] = gm * gf.gx[i] / mag;
            dgy[i] = gm * gf.gy[i] / mag;
        }
        g.xf += sobel_adjoint(dgx, dgy);
    } else {
        add_sign(g.xf, pred.xf, label1, h.lambda * inv_n);
        add_sign(g.xf, pred.xf, label2, h.lambda * inv_n);
        g.xf -= (h.lambda * h.phi) * ssim_gradient(pred.xf, label1);
        g.xf -= (h.lambda * h.phi) * ssim_gradient(pred.xf, label2);
    }
    return g;
}

}  // namespace degfuse
