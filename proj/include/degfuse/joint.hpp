// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "degfuse/dense.hpp"
#include "degfuse/image.hpp"
#include "degfuse/operators.hpp"

namespace degfuse {

/// Joint variable [x1; x2; xf]; all three planes live on the clean grid.
struct JointState {
    ImagePlane x1;
    ImagePlane x2;
    ImagePlane xf;

    Dims dims() const { return x1.dims(); }
    void validate() const;

    JointState& operator+=(const JointState& o);
    JointState& operator-=(const JointState& o);
    JointState& operator*=(double s);
    bool operator==(const JointState&) const = default;
};

JointState operator+(JointState a, const JointState& b);
JointState operator-(JointState a, const JointState& b);
JointState operator*(double s, JointState a);
double max_abs_diff(const JointState& a, const JointState& b);
/// Euclidean norm over all three blocks.
double norm(const JointState& s);

/// Stacked observation [y1; y2; y3]. As an observation y3 is the zero block;
/// as the output of joint_apply it carries the fusion-constraint residual.
struct JointObservation {
    ImagePlane y1;
    ImagePlane y2;
    ImagePlane y3;

    /// [y1; y2; 0] with the zero block on the clean grid `clean`.
    static JointObservation from_sources(ImagePlane y1, ImagePlane y2, Dims clean);
};

JointObservation operator-(const JointObservation& a, const JointObservation& b);

/// Block operator
///     [  A1   0   0 ]
///     [  0    A2  0 ]
///     [ -W1  -W2  I ]
/// with W1, W2 = 1 - W1 acting as per-pixel diagonal weights. The complementary
/// weight is never stored; it is always read as 1 - w1.
class JointOperator {
public:
    /// w1 is clamped into [0, 1].
    JointOperator(LinearDegradation a1, LinearDegradation a2, ImagePlane w1);

    const LinearDegradation& a1() const noexcept { return m_a1; }
    const LinearDegradation& a2() const noexcept { return m_a2; }
    const ImagePlane& w1() const noexcept { return m_w1; }
    double w2_at(std::size_t i) const noexcept { return 1.0 - m_w1[i]; }
    Dims clean_dims() const noexcept { return m_w1.dims(); }

private:
    LinearDegradation m_a1;
    LinearDegradation m_a2;
    ImagePlane m_w1;
};

/// A-hat s = [A1 x1; A2 x2; xf - W1 x1 - W2 x2].
JointObservation joint_apply(const JointOperator& j, const JointState& s);

/// Implicit generalized inverse
///     [ A1+      0        0 ]
///     [ 0        A2+      0 ]
///     [ W1 A1+   W2 A2+   I ]
/// applied to o; the fusion row reuses the two data-row results.
JointState joint_pinv_apply(const JointOperator& j, const JointObservation& o);

/// A-hat^T applied to an observation-shaped vector.
JointState joint_transpose_apply(const JointOperator& j, const JointObservation& o);

/// Per-step scalar attenuation of the correction term.
/// s_t = sqrt(1 - abar_t) / (sqrt(1 - abar_t) + sigma_y), and exactly 1 when sigma_y = 0.
struct CorrectionScale {
    double sigma_y = 0.0;
    double value = 1.0;

    static CorrectionScale for_step(double alpha_bar_t, double sigma_y);
};

/// Noise-free correction: est - A-hat+ (A-hat est - y).
JointState correct(const JointState& est, const JointOperator& j, const JointObservation& obs);
/// Scaled correction: est - s_t A-hat+ (A-hat est - y).
JointState correct(const JointState& est, const JointOperator& j, const JointObservation& obs,
                   const CorrectionScale& scale);

struct CgOptions {
    double tol = 1e-8;
    int max_iter = 500;
};

struct CgResult {
    JointState state;
    int iterations = 0;
    double residual_inf = 0.0;
};

/// Orthogonal projection of est onto {z : A-hat z = y} via Jacobi-preconditioned
/// CG on A-hat A-hat^T mu = A-hat est - y, then z = est - A-hat^T mu.
/// Throws NumericalError (with the residual) if max_iter is reached.
CgResult cg_project_detailed(const JointState& est, const JointOperator& j, const JointObservation& obs,
                             const CgOptions& options = {});
JointState cg_project(const JointState& est, const JointOperator& j, const JointObservation& obs,
                      double tol = 1e-8, int max_iter = 500);

/// Dense A-hat (rows: y1, y2, y3 stacked; cols: x1, x2, xf stacked).
DenseOperator materialize_joint(const JointOperator& j);
/// Dense A-hat+ as produced by joint_pinv_apply.
DenseOperator materialize_joint_pinv(const JointOperator& j);

ConditionReport check_mp_conditions(const JointOperator& j, double tol);

}  // namespace degfuse
