// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/dense.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "degfuse/errors.hpp"

namespace degfuse {

namespace {

void check_cap(std::size_t n, const char* what) {
    if (n > kMaterializeCap) {
        throw std::length_error(std::string(what) + ": " + std::to_string(n) + " exceeds the dense cap of " +
                                std::to_string(kMaterializeCap));
    }
}

constexpr int kJacobiMaxSweeps = 100;

}  // namespace

DenseOperator DenseOperator::identity(std::size_t n) {
    DenseOperator m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseOperator matmul(const DenseOperator& a, const DenseOperator& b) {
    if (a.cols != b.rows) throw DimensionError("matmul: inner dimensions differ");
    DenseOperator c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = &b.entries[k * b.cols];
            double* crow = &c.entries[i * c.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    return c;
}

DenseOperator transpose(const DenseOperator& a) {
    DenseOperator t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i) m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

DenseOperator materialize_map(const LinearMap& f, Dims in, Dims out) {
    DenseOperator m(out.count(), in.count());
    for (std::size_t j = 0; j < in.count(); ++j) {
        const ImagePlane col = f(unit_image(in, j));
        require_same_dims(col.dims(), out, "materialize");
        for (std::size_t i = 0; i < out.count(); ++i) m(i, j) = col[i];
    }
    return m;
}

DenseOperator materialize(const LinearDegradation& op) {
    check_cap(op.in_dims().count(), "materialize");
    check_cap(op.out_dims().count(), "materialize");
    return materialize_map([&op](const ImagePlane& x) { return op.apply(x); }, op.in_dims(), op.out_dims());
}

DenseOperator materialize_pinv(const LinearDegradation& op) {
    check_cap(op.in_dims().count(), "materialize_pinv");
    check_cap(op.out_dims().count(), "materialize_pinv");
    return materialize_map([&op](const ImagePlane& y) { return op.apply_pinv(y); }, op.out_dims(), op.in_dims());
}

DenseOperator svd_pinv(const DenseOperator& m, double tol) {
    check_cap(m.rows, "svd_pinv");
    check_cap(m.cols, "svd_pinv");
    // Work on a tall matrix; pinv(A^T) = pinv(A)^T.
    if (m.rows < m.cols) return transpose(svd_pinv(transpose(m), tol));

    const std::size_t rows = m.rows, n = m.cols;
    // Columns stored contiguously: u[j] is column j of the working matrix.
    std::vector<std::vector<double>> u(n, std::vector<double>(rows));
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < rows; ++i) u[j][i] = m(i, j);
        v[j][j] = 1.0;
    }

    const double eps = 1e-15;
    bool converged = false;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += u[p][i] * u[p][i];
                    beta += u[q][i] * u[q][i];
                    gamma += u[p][i] * u[q][i];
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double up = u[p][i], uq = u[q][i];
                    u[p][i] = c * up - s * uq;
                    u[q][i] = s * up + c * uq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v[p][i], vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
    }
    if (!converged) {
        throw NumericalError("svd_pinv: Jacobi SVD did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
    }

    std::vector<double> sigma(n);
    double sigma_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (double x : u[j]) s += x * x;
        sigma[j] = std::sqrt(s);
        sigma_max = std::max(sigma_max, sigma[j]);
    }

    // pinv = V diag(1/sigma) U_normalized^T = sum_j v_j u_j^T / sigma_j^2.
    DenseOperator pinv(n, rows);
    for (std::size_t j = 0; j < n; ++j) {
        if (sigma[j] <= tol * sigma_max || sigma[j] == 0.0) continue;
        const double inv_s2 = 1.0 / (sigma[j] * sigma[j]);
        for (std::size_t a = 0; a < n; ++a) {
            const double va = v[j][a] * inv_s2;
            if (va == 0.0) continue;
            for (std::size_t b = 0; b < rows; ++b) pinv(a, b) += va * u[j][b];
        }
    }
    return pinv;
}

ConditionReport mp_conditions(const DenseOperator& a, const DenseOperator& p, double tol) {
    if (a.rows != p.cols || a.cols != p.rows) throw DimensionError("mp_conditions: P must be cols x rows of A");
    const DenseOperator ap = matmul(a, p);
    const DenseOperator pa = matmul(p, a);
    ConditionReport r;
    r.tol = tol;
    r.deviation[0] = max_abs_diff(matmul(ap, a), a);
    r.deviation[1] = max_abs_diff(matmul(pa, p), p);
    r.deviation[2] = max_abs_diff(transpose(ap), ap);
    r.deviation[3] = max_abs_diff(transpose(pa), pa);
    return r;
}

ConditionReport verify_operator(const LinearDegradation& op, double tol) {
    return mp_conditions(materialize(op), materialize_pinv(op), tol);
}

std::string ConditionReport::format() const {
    static constexpr const char* names[4] = {"(1) A P A = A", "(2) P A P = P", "(3) (A P)^T = A P", "(4) (P A)^T = P A"};
    std::string out;
    char line[128];
    for (std::size_t i = 0; i < 4; ++i) {
        std::snprintf(line, sizeof line, "%-20s max|dev| = %-12.4e %s\n", names[i], deviation[i],
                      passes(i) ? "ok" : "FAIL");
        out += line;
    }
    return out;
}

}  // namespace degfuse
