// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/denoiser.hpp"

#include <cmath>
#include <stdexcept>

#include "degfuse/errors.hpp"

namespace degfuse {

DenoiserOutput oracle_predict(const JointState& x_t, int t, const DiffusionSchedule& sched, const JointState& clean,
                              double w1_const, bool normalize) {
    if (t < 1 || t > sched.steps()) throw std::out_of_range("oracle_predict: step out of range");
    if (!(w1_const > 0.0 && w1_const < 1.0)) throw std::invalid_argument("oracle_predict: w1 must lie in (0,1)");
    x_t.validate();
    clean.validate();
    require_same_dims(x_t.dims(), clean.dims(), "oracle_predict");
    const double ab = sched.alpha_bar(t);
    if (ab >= 1.0) throw NumericalError("oracle_predict: alpha_bar_t = 1 leaves the noise undefined");
    const double inv = 1.0 / std::sqrt(1.0 - ab);
    const double clean_scale = normalize ? std::sqrt(ab) : 1.0;

    DenoiserOutput out{x_t - clean_scale * clean, ImagePlane(x_t.dims(), w1_const)};
    out.eps *= inv;
    return out;
}

OracleDenoiser::OracleDenoiser(JointState clean, double w1_const, bool normalize)
    : m_clean(std::move(clean)), m_w1(w1_const), m_normalize(normalize) {
    m_clean.validate();
}

DenoiserOutput OracleDenoiser::predict(const JointState& x_t, int t, const DiffusionSchedule& sched) const {
    return oracle_predict(x_t, t, sched, m_clean, m_w1, m_normalize);
}

}  // namespace degfuse
