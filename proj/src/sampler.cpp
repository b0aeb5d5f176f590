// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "degfuse/errors.hpp"

namespace degfuse {

JointState forward_noise(const JointState& x0, int t, const DiffusionSchedule& sched, SeededRng& rng) {
    x0.validate();
    const double ab = sched.alpha_bar(t);
    if (t == 0) return x0;
    const double a = std::sqrt(ab), b = std::sqrt(1.0 - ab);
    JointState out = x0;
    for (ImagePlane* p : {&out.x1, &out.x2, &out.xf})
        for (double& v : p->values()) v = a * v + b * rng.normal();
    return out;
}

DdimStep::DdimStep(const JointState& x_t, JointState eps, int t, const DiffusionSchedule& sched, bool normalize)
    : m_eps(std::move(eps)) {
    if (t < 1 || t > sched.steps()) throw std::out_of_range("ddim_step: step out of range");
    x_t.validate();
    m_eps.validate();
    require_same_dims(x_t.dims(), m_eps.dims(), "ddim_step");
    const double ab = sched.alpha_bar(t);
    m_alpha_bar_prev = sched.alpha_bar(t - 1);
    m_x0_hat = x_t - std::sqrt(1.0 - ab) * m_eps;
    if (normalize) m_x0_hat *= 1.0 / std::sqrt(ab);
}

JointState DdimStep::next(const JointState& corrected) const {
    return std::sqrt(m_alpha_bar_prev) * corrected + std::sqrt(1.0 - m_alpha_bar_prev) * m_eps;
}

JointState initial_state(const ImagePlane& y1, const ImagePlane& y2, const LinearDegradation& a1,
                         const LinearDegradation& a2) {
    JointState s{a1.apply_pinv(y1), a2.apply_pinv(y2), {}};
    s.xf = lincomb(0.5, s.x1, 0.5, s.x2);
    s.validate();
    return s;
}

FusionResult run_fusion(const ImagePlane& y1, const ImagePlane& y2, const LinearDegradation& a1,
                        const LinearDegradation& a2, const Denoiser& denoiser, const FusionConfig& cfg) {
    const DiffusionSchedule sched = make_schedule(cfg);
    require_same_dims(y1.dims(), a1.out_dims(), "run_fusion y1");
    require_same_dims(y2.dims(), a2.out_dims(), "run_fusion y2");
    require_same_dims(a1.in_dims(), a2.in_dims(), "run_fusion clean grids");

    const JointObservation obs = JointObservation::from_sources(y1, y2, a1.in_dims());
    SeededRng rng(cfg.seed);
    JointState x = forward_noise(initial_state(y1, y2, a1, a2), sched.steps(), sched, rng);

    FusionResult result;
    for (int t = sched.steps(); t >= 1; --t) {
        DenoiserOutput pred = denoiser.predict(x, t, sched);
        const JointOperator joint(a1, a2, pred.w1);
        const DdimStep step(x, std::move(pred.eps), t, sched, cfg.ddim_normalize);
        const CorrectionScale scale = CorrectionScale::for_step(sched.alpha_bar(t), cfg.sigma_y);
        JointState corrected = correct(step.x0_hat(), joint, obs, scale);
        JointState next = step.next(corrected);
        if (!all_finite(next.x1) || !all_finite(next.x2) || !all_finite(next.xf)) {
            throw NumericalError("run_fusion: non-finite state at step " + std::to_string(t));
        }
        if (cfg.keep_trace) {
            result.trace.push_back({t, std::move(x), step.x0_hat(), std::move(corrected), joint.w1(), scale.value});
        }
        x = std::move(next);
    }
    result.fused = clamp01(x.xf);
    result.final_state = std::move(x);
    return result;
}

}  // namespace degfuse
