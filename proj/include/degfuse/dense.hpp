// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "degfuse/image.hpp"
#include "degfuse/operators.hpp"

namespace degfuse {

/// Largest pixel count (per block) that may be materialized densely.
inline constexpr std::size_t kMaterializeCap = 4096;

/// Row-major dense matrix. Exists for verification only; the production
/// path never materializes an operator.
struct DenseOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;

    DenseOperator() = default;
    DenseOperator(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}

    static DenseOperator identity(std::size_t n);

    double& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

DenseOperator matmul(const DenseOperator& a, const DenseOperator& b);
DenseOperator transpose(const DenseOperator& a);
double max_abs_diff(const DenseOperator& a, const DenseOperator& b);

using LinearMap = std::function<ImagePlane(const ImagePlane&)>;

/// Column j is f(e_j) flattened row-major.
DenseOperator materialize_map(const LinearMap& f, Dims in, Dims out);
DenseOperator materialize(const LinearDegradation& op);
DenseOperator materialize_pinv(const LinearDegradation& op);

/// Moore-Penrose pseudoinverse through a one-sided (Hestenes) Jacobi SVD.
/// Singular values below tol * sigma_max are treated as zero.
DenseOperator svd_pinv(const DenseOperator& m, double tol = 1e-12);

/// Max-abs deviations for the four Penrose conditions on (A, P):
/// [0] APA - A, [1] PAP - P, [2] (AP)^T - AP, [3] (PA)^T - PA.
struct ConditionReport {
    std::array<double, 4> deviation{};
    double tol = 0.0;

    bool passes(std::size_t condition) const { return deviation.at(condition) <= tol; }
    bool all_pass() const { return passes(0) && passes(1) && passes(2) && passes(3); }
    /// Aligned four-line text form used by the `verify` command.
    std::string format() const;
};

ConditionReport mp_conditions(const DenseOperator& a, const DenseOperator& p, double tol);

/// Dense check of an operator against its own pseudoinverse applier.
ConditionReport verify_operator(const LinearDegradation& op, double tol);

}  // namespace degfuse
