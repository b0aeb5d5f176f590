// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "degfuse/denoiser.hpp"
#include "degfuse/joint.hpp"
#include "degfuse/operators.hpp"
#include "degfuse/rng.hpp"
#include "degfuse/schedule.hpp"

namespace degfuse {

/// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps, with eps drawn for x1, x2, xf
/// in that order. t = 0 returns x0 unchanged without drawing.
JointState forward_noise(const JointState& x0, int t, const DiffusionSchedule& sched, SeededRng& rng);

/// One deterministic DDIM step split around the external correction:
/// x0_hat = x_t - sqrt(1 - abar_t) eps (optionally / sqrt(abar_t)), and
/// next(x0_bar) = sqrt(abar_{t-1}) x0_bar + sqrt(1 - abar_{t-1}) eps.
class DdimStep {
public:
    DdimStep(const JointState& x_t, JointState eps, int t, const DiffusionSchedule& sched, bool normalize);

    const JointState& x0_hat() const noexcept { return m_x0_hat; }
    JointState next(const JointState& corrected) const;

private:
    JointState m_eps;
    JointState m_x0_hat;
    double m_alpha_bar_prev;
};

inline DdimStep ddim_step(const JointState& x_t, JointState eps, int t, const DiffusionSchedule& sched,
                          bool normalize = false) {
    return DdimStep(x_t, std::move(eps), t, sched, normalize);
}

/// Pseudoinverse restoration of both observations with the fused block at their mean.
JointState initial_state(const ImagePlane& y1, const ImagePlane& y2, const LinearDegradation& a1,
                         const LinearDegradation& a2);

struct StepRecord {
    int t = 0;
    JointState x_t;
    JointState x0_hat;
    JointState corrected;
    ImagePlane w1;
    double correction_scale = 1.0;
};

struct FusionResult {
    /// x_f of the final state clamped to [0, 1].
    ImagePlane fused;
    JointState final_state;
    /// Populated when FusionConfig::keep_trace is set.
    std::vector<StepRecord> trace;
};

/// Few-step corrected DDIM loop. For t = T..1: predict (eps, W1), form the
/// joint operator, compute x0_hat, project it through the joint constraint,
/// then step to x_{t-1}.
FusionResult run_fusion(const ImagePlane& y1, const ImagePlane& y2, const LinearDegradation& a1,
                        const LinearDegradation& a2, const Denoiser& denoiser, const FusionConfig& cfg);

}  // namespace degfuse
