// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/joint.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "degfuse/errors.hpp"

namespace degfuse {

void JointState::validate() const {
    require_same_dims(x1.dims(), x2.dims(), "JointState x1/x2");
    require_same_dims(x1.dims(), xf.dims(), "JointState x1/xf");
}

JointState& JointState::operator+=(const JointState& o) {
    x1 += o.x1;
    x2 += o.x2;
    xf += o.xf;
    return *this;
}

JointState& JointState::operator-=(const JointState& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    xf -= o.xf;
    return *this;
}

JointState& JointState::operator*=(double s) {
    x1 *= s;
    x2 *= s;
    xf *= s;
    return *this;
}

JointState operator+(JointState a, const JointState& b) { return a += b; }
JointState operator-(JointState a, const JointState& b) { return a -= b; }
JointState operator*(double s, JointState a) { return a *= s; }

double max_abs_diff(const JointState& a, const JointState& b) {
    return std::max({max_abs_diff(a.x1, b.x1), max_abs_diff(a.x2, b.x2), max_abs_diff(a.xf, b.xf)});
}

double norm(const JointState& s) {
    double acc = 0.0;
    for (const ImagePlane* p : {&s.x1, &s.x2, &s.xf})
        for (double v : p->values()) acc += v * v;
    return std::sqrt(acc);
}

JointObservation JointObservation::from_sources(ImagePlane y1, ImagePlane y2, Dims clean) {
    return {std::move(y1), std::move(y2), ImagePlane(clean)};
}

JointObservation operator-(const JointObservation& a, const JointObservation& b) {
    return {a.y1 - b.y1, a.y2 - b.y2, a.y3 - b.y3};
}

JointOperator::JointOperator(LinearDegradation a1, LinearDegradation a2, ImagePlane w1)
    : m_a1(std::move(a1)), m_a2(std::move(a2)), m_w1(clamp01(w1)) {
    require_same_dims(m_a1.in_dims(), m_w1.dims(), "JointOperator a1/w1");
    require_same_dims(m_a2.in_dims(), m_w1.dims(), "JointOperator a2/w1");
}

namespace {

void check_state(const JointOperator& j, const JointState& s) {
    s.validate();
    require_same_dims(s.dims(), j.clean_dims(), "joint state");
}

void check_observation(const JointOperator& j, const JointObservation& o) {
    require_same_dims(o.y1.dims(), j.a1().out_dims(), "joint observation y1");
    require_same_dims(o.y2.dims(), j.a2().out_dims(), "joint observation y2");
    require_same_dims(o.y3.dims(), j.clean_dims(), "joint observation y3");
}

/// xf - W1 x1 - W2 x2 per pixel.
ImagePlane fusion_residual(const JointOperator& j, const ImagePlane& x1, const ImagePlane& x2, const ImagePlane& xf) {
    ImagePlane r(j.clean_dims());
    const ImagePlane& w1 = j.w1();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = xf[i] - w1[i] * x1[i] - j.w2_at(i) * x2[i];
    return r;
}

JointState pinv_blocks(const JointOperator& j, const ImagePlane& y1, const ImagePlane& y2, const ImagePlane& y3) {
    JointState out{j.a1().apply_pinv(y1), j.a2().apply_pinv(y2), ImagePlane(j.clean_dims())};
    const ImagePlane& w1 = j.w1();
    for (std::size_t i = 0; i < out.xf.size(); ++i) {
        assert(std::abs(w1[i] + j.w2_at(i) - 1.0) < 1e-15);
        out.xf[i] = w1[i] * out.x1[i] + j.w2_at(i) * out.x2[i] + y3[i];
    }
    return out;
}

}  // namespace

JointObservation joint_apply(const JointOperator& j, const JointState& s) {
    check_state(j, s);
    return {j.a1().apply(s.x1), j.a2().apply(s.x2), fusion_residual(j, s.x1, s.x2, s.xf)};
}

JointState joint_pinv_apply(const JointOperator& j, const JointObservation& o) {
    check_observation(j, o);
    return pinv_blocks(j, o.y1, o.y2, o.y3);
}

JointState joint_transpose_apply(const JointOperator& j, const JointObservation& o) {
    check_observation(j, o);
    JointState out{j.a1().apply_transpose(o.y1), j.a2().apply_transpose(o.y2), o.y3};
    const ImagePlane& w1 = j.w1();
    for (std::size_t i = 0; i < o.y3.size(); ++i) {
        out.x1[i] -= w1[i] * o.y3[i];
        out.x2[i] -= j.w2_at(i) * o.y3[i];
    }
    return out;
}

CorrectionScale CorrectionScale::for_step(double alpha_bar_t, double sigma_y) {
    if (sigma_y < 0.0) throw std::invalid_argument("CorrectionScale: sigma_y must be non-negative");
    if (alpha_bar_t < 0.0 || alpha_bar_t > 1.0) throw std::invalid_argument("CorrectionScale: alpha_bar outside [0,1]");
    CorrectionScale s;
    s.sigma_y = sigma_y;
    if (sigma_y == 0.0) return s;
    const double root = std::sqrt(1.0 - alpha_bar_t);
    s.value = root / (root + sigma_y);
    return s;
}

JointState correct(const JointState& est, const JointOperator& j, const JointObservation& obs) {
    check_observation(j, obs);
    const JointObservation residual = joint_apply(j, est) - obs;
    return est - joint_pinv_apply(j, residual);
}

JointState correct(const JointState& est, const JointOperator& j, const JointObservation& obs,
                   const CorrectionScale& scale) {
    check_observation(j, obs);
    const JointObservation residual = joint_apply(j, est) - obs;
    JointState delta = joint_pinv_apply(j, residual);
    delta *= scale.value;
    return est - delta;
}

namespace {

double inf_norm(const JointObservation& o) {
    return std::max({max_abs(o.y1), max_abs(o.y2), max_abs(o.y3)});
}

double dot(const JointObservation& a, const JointObservation& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.y1.size(); ++i) s += a.y1[i] * b.y1[i];
    for (std::size_t i = 0; i < a.y2.size(); ++i) s += a.y2[i] * b.y2[i];
    for (std::size_t i = 0; i < a.y3.size(); ++i) s += a.y3[i] * b.y3[i];
    return s;
}

void axpy(double a, const JointObservation& x, JointObservation& y) {
    for (std::size_t i = 0; i < x.y1.size(); ++i) y.y1[i] += a * x.y1[i];
    for (std::size_t i = 0; i < x.y2.size(); ++i) y.y2[i] += a * x.y2[i];
    for (std::size_t i = 0; i < x.y3.size(); ++i) y.y3[i] += a * x.y3[i];
}

JointObservation hadamard(const JointObservation& a, const JointObservation& b) {
    return {degfuse::hadamard(a.y1, b.y1), degfuse::hadamard(a.y2, b.y2), degfuse::hadamard(a.y3, b.y3)};
}

}  // namespace

CgResult cg_project_detailed(const JointState& est, const JointOperator& j, const JointObservation& obs,
                             const CgOptions& options) {
    check_state(j, est);
    check_observation(j, obs);

    // Inverse diagonal of A-hat A-hat^T.
    const double d1 = j.a1().row_norm_sq(), d2 = j.a2().row_norm_sq();
    JointObservation inv_diag{ImagePlane(j.a1().out_dims(), d1 > 0 ? 1.0 / d1 : 1.0),
                              ImagePlane(j.a2().out_dims(), d2 > 0 ? 1.0 / d2 : 1.0), ImagePlane(j.clean_dims())};
    for (std::size_t i = 0; i < inv_diag.y3.size(); ++i) {
        const double w = j.w1()[i], v = j.w2_at(i);
        inv_diag.y3[i] = 1.0 / (1.0 + w * w + v * v);
    }

    auto normal_op = [&j](const JointObservation& mu) { return joint_apply(j, joint_transpose_apply(j, mu)); };

    // With mu = 0 the CG residual b - A A^T mu equals y - A-hat z for z = est - A^T mu.
    JointObservation mu{ImagePlane(j.a1().out_dims()), ImagePlane(j.a2().out_dims()), ImagePlane(j.clean_dims())};
    JointObservation r = joint_apply(j, est) - obs;
    CgResult result;
    result.residual_inf = inf_norm(r);
    if (result.residual_inf <= options.tol) {
        result.state = est;
        return result;
    }
    JointObservation z = hadamard(inv_diag, r);
    JointObservation p = z;
    double rz = dot(r, z);
    for (int it = 1; it <= options.max_iter; ++it) {
        const JointObservation ap = normal_op(p);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;
        const double alpha = rz / pap;
        axpy(alpha, p, mu);
        axpy(-alpha, ap, r);
        result.iterations = it;
        result.residual_inf = inf_norm(r);
        if (result.residual_inf <= options.tol) {
            result.state = est - joint_transpose_apply(j, mu);
            return result;
        }
        z = hadamard(inv_diag, r);
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        p.y1 = z.y1 + beta * p.y1;
        p.y2 = z.y2 + beta * p.y2;
        p.y3 = z.y3 + beta * p.y3;
    }
    throw NumericalError("cg_project: no convergence after " + std::to_string(result.iterations) +
                         " iterations, residual " + std::to_string(result.residual_inf));
}

JointState cg_project(const JointState& est, const JointOperator& j, const JointObservation& obs, double tol,
                      int max_iter) {
    return cg_project_detailed(est, j, obs, CgOptions{tol, max_iter}).state;
}

namespace {

struct BlockLayout {
    std::size_t n;   // clean pixel count
    std::size_t m1;  // y1 pixel count
    std::size_t m2;  // y2 pixel count
};

BlockLayout layout(const JointOperator& j) {
    const std::size_t n = j.clean_dims().count();
    if (n > kMaterializeCap) throw std::length_error("materialize_joint: block exceeds dense cap");
    return {n, j.a1().out_dims().count(), j.a2().out_dims().count()};
}

ImagePlane slice(const std::vector<double>& v, std::size_t offset, Dims d) {
    return ImagePlane(d.height, d.width, std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(offset),
                                                             v.begin() + static_cast<std::ptrdiff_t>(offset + d.count())));
}

void store(std::vector<double>& v, std::size_t offset, const ImagePlane& p) {
    std::copy(p.values().begin(), p.values().end(), v.begin() + static_cast<std::ptrdiff_t>(offset));
}

}  // namespace

DenseOperator materialize_joint(const JointOperator& j) {
    const BlockLayout b = layout(j);
    const Dims d = j.clean_dims();
    DenseOperator m(b.m1 + b.m2 + b.n, 3 * b.n);
    std::vector<double> in(3 * b.n, 0.0), out(m.rows);
    for (std::size_t col = 0; col < m.cols; ++col) {
        std::fill(in.begin(), in.end(), 0.0);
        in[col] = 1.0;
        const JointObservation o = joint_apply(j, {slice(in, 0, d), slice(in, b.n, d), slice(in, 2 * b.n, d)});
        store(out, 0, o.y1);
        store(out, b.m1, o.y2);
        store(out, b.m1 + b.m2, o.y3);
        for (std::size_t row = 0; row < m.rows; ++row) m(row, col) = out[row];
    }
    return m;
}

DenseOperator materialize_joint_pinv(const JointOperator& j) {
    const BlockLayout b = layout(j);
    const Dims d = j.clean_dims();
    DenseOperator m(3 * b.n, b.m1 + b.m2 + b.n);
    std::vector<double> in(m.cols, 0.0), out(m.rows);
    for (std::size_t col = 0; col < m.cols; ++col) {
        std::fill(in.begin(), in.end(), 0.0);
        in[col] = 1.0;
        const JointState s = joint_pinv_apply(
            j, {slice(in, 0, j.a1().out_dims()), slice(in, b.m1, j.a2().out_dims()), slice(in, b.m1 + b.m2, d)});
        store(out, 0, s.x1);
        store(out, b.n, s.x2);
        store(out, 2 * b.n, s.xf);
        for (std::size_t row = 0; row < m.rows; ++row) m(row, col) = out[row];
    }
    return m;
}

ConditionReport check_mp_conditions(const JointOperator& j, double tol) {
    return mp_conditions(materialize_joint(j), materialize_joint_pinv(j), tol);
}

}  // namespace degfuse
