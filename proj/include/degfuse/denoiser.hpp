// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "degfuse/joint.hpp"
#include "degfuse/schedule.hpp"

namespace degfuse {

struct DenoiserOutput {
    JointState eps;
    /// Fusion weight map, strictly inside (0, 1).
    ImagePlane w1;
};

/// Noise predictor for the joint state that also emits the fusion weight map.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual DenoiserOutput predict(const JointState& x_t, int t, const DiffusionSchedule& sched) const = 0;
};

/// Exact noise for a known clean target: eps = (x_t - clean) / sqrt(1 - abar_t),
/// so the unnormalized x0 estimate reproduces `clean`. With `normalize` the
/// target is instead the textbook DDIM inverse (x_t - sqrt(abar_t) clean) / sqrt(1 - abar_t).
DenoiserOutput oracle_predict(const JointState& x_t, int t, const DiffusionSchedule& sched, const JointState& clean,
                              double w1_const, bool normalize = false);

class OracleDenoiser final : public Denoiser {
public:
    OracleDenoiser(JointState clean, double w1_const, bool normalize = false);

    DenoiserOutput predict(const JointState& x_t, int t, const DiffusionSchedule& sched) const override;

private:
    JointState m_clean;
    double m_w1;
    bool m_normalize;
};

}  // namespace degfuse
