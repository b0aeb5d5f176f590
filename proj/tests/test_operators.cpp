// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "degfuse/dense.hpp"
#include "degfuse/errors.hpp"
#include "degfuse/operators.hpp"
#include "degfuse/opspec.hpp"
#include "support/oracles.hpp"

using namespace degfuse;

namespace {

BlurKernel box3() {
    BlurKernel k;
    k.size = 3;
    k.weights.assign(9, 1.0 / 9.0);
    return k;
}

double inner(const ImagePlane& a, const ImagePlane& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

DenseOperator random_dense(std::size_t rows, std::size_t cols, SeededRng& rng) {
    DenseOperator m(rows, cols);
    for (double& v : m.entries) v = rng.uniform(-1, 1);
    return m;
}

}  // namespace

TEST_CASE("downsample averages blocks and replicates back") {
    const auto down = LinearDegradation::downsample({2, 2}, 2);
    const ImagePlane y = down.apply(ImagePlane(2, 2, std::vector<double>{1, 3, 5, 7}));
    REQUIRE(y.dims() == Dims{1, 1});
    CHECK(y[0] == 4.0);
    CHECK(down.apply_pinv(y) == ImagePlane(2, 2, 4.0));
    CHECK_THROWS_AS(LinearDegradation::downsample({5, 4}, 2), DimensionError);
}

TEST_CASE("box blur keeps constants and wraps circularly") {
    const auto blur = LinearDegradation::blur({6, 5}, box3());
    CHECK(max_abs_diff(blur.apply(ImagePlane(6, 5, 0.3)), ImagePlane(6, 5, 0.3)) <= 1e-15);

    ImagePlane corner(6, 5);
    corner(0, 0) = 9.0;
    const ImagePlane y = blur.apply(corner);
    CHECK(y(5, 4) == doctest::Approx(1.0));
    CHECK(y(1, 1) == doctest::Approx(1.0));
    CHECK(y(2, 2) == 0.0);
}

TEST_CASE("composite applies left to right") {
    SeededRng rng(1);
    const ImagePlane x = oracle::random_plane({8, 8}, rng);
    const auto blur = LinearDegradation::blur({8, 8}, gaussian_kernel(1.0));
    const auto down = LinearDegradation::downsample({8, 8}, 2);
    const auto comp = LinearDegradation::composite({blur, down});
    CHECK(comp.out_dims() == Dims{4, 4});
    CHECK(max_abs_diff(comp.apply(x), down.apply(blur.apply(x))) <= 1e-15);
    CHECK_THROWS_AS(LinearDegradation::composite({down, blur}), DimensionError);
}

TEST_CASE("wiener pinv of a constant image") {
    const double gamma = 0.05;
    const auto blur = LinearDegradation::blur({6, 6}, gaussian_kernel(1.0), gamma);
    CHECK(max_abs_diff(blur.apply_pinv(ImagePlane(6, 6, 0.8)), ImagePlane(6, 6, 0.8 / (1.0 + gamma))) <= 1e-12);
    const auto id = LinearDegradation::identity({3, 4});
    SeededRng rng(2);
    const ImagePlane y = oracle::random_plane({3, 4}, rng);
    CHECK(id.apply_pinv(y) == y);
    CHECK(id.apply(y) == y);
}

TEST_CASE("blur kernels must be normalized") {
    BlurKernel k = box3();
    k.weights[0] += 0.1;
    CHECK_THROWS(LinearDegradation::blur({4, 4}, k));
    CHECK_THROWS(LinearDegradation::blur({4, 4}, box3(), -1.0));
    const BlurKernel g = gaussian_kernel(1.0);
    CHECK(g.size == 5);
    double sum = 0.0;
    for (double w : g.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("direct stencil matches the definition and the FFT path") {
    SeededRng rng(3);
    for (Dims d : {Dims{8, 8}, Dims{7, 10}, Dims{5, 5}}) {
        const BlurKernel k = oracle::centre_heavy_kernel(rng, 5);
        const auto blur = LinearDegradation::blur(d, k);
        const ImagePlane x = oracle::random_plane(d, rng);
        CHECK(max_abs_diff(blur.apply(x), oracle::naive_circular_blur(x, k)) <= 1e-14);
        CHECK(max_abs_diff(blur.apply(x), blur_via_fft(blur, x)) <= 1e-9);
    }
}

TEST_CASE("materialized operators") {
    const DenseOperator id = materialize(LinearDegradation::identity({2, 2}));
    CHECK(max_abs_diff(id, DenseOperator::identity(4)) == 0.0);

    const DenseOperator down = materialize(LinearDegradation::downsample({2, 2}, 2));
    REQUIRE(down.rows == 1);
    REQUIRE(down.cols == 4);
    for (std::size_t c = 0; c < 4; ++c) CHECK(down(0, c) == 0.25);

    const DenseOperator blur = materialize(LinearDegradation::blur({5, 4}, gaussian_kernel(1.0)));
    for (std::size_t r = 0; r < blur.rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < blur.cols; ++c) sum += blur(r, c);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(materialize(LinearDegradation::identity({65, 64})), std::length_error);
}

TEST_CASE("svd_pinv examples") {
    CHECK(max_abs_diff(svd_pinv(DenseOperator::identity(6)), DenseOperator::identity(6)) <= 1e-12);

    DenseOperator row(1, 4);
    for (double& v : row.entries) v = 0.25;
    const DenseOperator col = svd_pinv(row);
    REQUIRE(col.rows == 4);
    REQUIRE(col.cols == 1);
    for (std::size_t r = 0; r < 4; ++r) CHECK(std::abs(col(r, 0) - 1.0) <= 1e-10);

    SeededRng rng(4);
    const DenseOperator m = random_dense(12, 20, rng);
    const ConditionReport rep = mp_conditions(m, svd_pinv(m), 1e-8);
    CHECK(rep.all_pass());

    const DenseOperator tall = random_dense(9, 4, rng);
    CHECK(mp_conditions(tall, svd_pinv(tall), 1e-8).all_pass());
}

TEST_CASE("svd_pinv of a rank-deficient matrix") {
    SeededRng rng(5);
    const DenseOperator u = random_dense(8, 3, rng), v = random_dense(3, 6, rng);
    const DenseOperator m = matmul(u, v);
    const DenseOperator p = svd_pinv(m, 1e-10);
    CHECK(mp_conditions(m, p, 1e-8).all_pass());
}

TEST_CASE("verify_operator on exact and regularized pseudoinverses") {
    for (Dims d : {Dims{4, 4}, Dims{6, 8}}) {
        CHECK(verify_operator(LinearDegradation::downsample(d, 2), 1e-10).all_pass());
    }
    SeededRng rng(6);
    const auto exact = LinearDegradation::blur({5, 6}, oracle::centre_heavy_kernel(rng), 0.0);
    CHECK(verify_operator(exact, 1e-8).all_pass());

    const double gamma = 0.05;
    const auto wiener = LinearDegradation::blur({6, 6}, gaussian_kernel(1.0), gamma);
    const ConditionReport rep = verify_operator(wiener, 1e-8);
    CHECK_FALSE(rep.passes(0));
    CHECK(rep.deviation[0] < 10 * gamma);
    CHECK(rep.deviation[0] > 1e-4);
    CHECK(rep.format().find("(1) A P A = A") != std::string::npos);
}

TEST_CASE("apply-pinv-apply is exact for identity and downsample") {
    SeededRng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const ImagePlane x = oracle::random_plane({8, 12}, rng);
        for (const auto& op : {LinearDegradation::identity({8, 12}), LinearDegradation::downsample({8, 12}, 2),
                               LinearDegradation::downsample({8, 12}, 4)}) {
            const ImagePlane ax = op.apply(x);
            CHECK(max_abs_diff(op.apply(op.apply_pinv(ax)), ax) <= 1e-12);
        }
    }
}

TEST_CASE("composite pinv follows the reverse-order rule") {
    SeededRng rng(8);
    const Dims d{8, 8}, h{4, 4};
    const auto b = LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0);
    const auto c = LinearDegradation::downsample(d, 2);
    const auto comp = LinearDegradation::composite({b, c});
    const DenseOperator expected = matmul(materialize_pinv(b), materialize_pinv(c));
    CHECK(max_abs_diff(materialize_pinv(comp), expected) <= 1e-10);

    const auto e = LinearDegradation::blur(h, oracle::centre_heavy_kernel(rng), 0.0);
    const auto chain = LinearDegradation::composite({b, c, e});
    const DenseOperator chain_expected =
        matmul(matmul(materialize_pinv(b), materialize_pinv(c)), materialize_pinv(e));
    CHECK(max_abs_diff(materialize_pinv(chain), chain_expected) <= 1e-10);
}

TEST_CASE("wiener pinv converges as gamma vanishes") {
    SeededRng rng(9);
    const Dims d{8, 8};
    const ImagePlane x = oracle::random_plane(d, rng);
    const BlurKernel k = oracle::centre_heavy_kernel(rng, 5);
    double previous = 1e300;
    for (double gamma : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const auto op = LinearDegradation::blur(d, k, gamma);
        const double err = max_abs_diff(op.apply_pinv(op.apply(x)), x);
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous <= 1e-5);
}

TEST_CASE("transpose and pinv-transpose appliers are adjoint") {
    SeededRng rng(10);
    const Dims d{8, 8};
    const std::vector<LinearDegradation> ops{
        LinearDegradation::identity(d), LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng, 5)),
        LinearDegradation::downsample(d, 2),
        LinearDegradation::composite({LinearDegradation::blur(d, gaussian_kernel(1.0)), LinearDegradation::downsample(d, 2)})};
    for (const auto& op : ops) {
        const ImagePlane x = oracle::random_plane(op.in_dims(), rng, -1, 1);
        const ImagePlane y = oracle::random_plane(op.out_dims(), rng, -1, 1);
        CHECK(inner(op.apply(x), y) == doctest::Approx(inner(x, op.apply_transpose(y))).epsilon(1e-12));
        CHECK(inner(op.apply_pinv(y), x) == doctest::Approx(inner(y, op.apply_pinv_transpose(x))).epsilon(1e-12));
        CHECK(max_abs_diff(materialize_map([&](const ImagePlane& v) { return op.apply_transpose(v); }, op.out_dims(),
                                           op.in_dims()),
                           transpose(materialize(op))) <= 1e-12);

        const DenseOperator a = materialize(op);
        double row0 = 0.0;
        for (std::size_t c = 0; c < a.cols; ++c) row0 += a(0, c) * a(0, c);
        CHECK(op.row_norm_sq() == doctest::Approx(row0).epsilon(1e-12));
    }
}

TEST_CASE("operator spec grammar") {
    const OpSpec s = parse_opspec("blur:sigma=1.5,gamma=1e-4,size=7+down:s=2");
    REQUIRE(s.stages.size() == 2);
    CHECK(s.stages[0].kind == DegradationKind::blur);
    CHECK(s.stages[0].sigma == 1.5);
    CHECK(s.stages[0].gamma == 1e-4);
    CHECK(s.stages[0].kernel_size == 7);
    CHECK(s.stages[1].kind == DegradationKind::downsample);
    CHECK(s.stages[1].scale == 2);
    CHECK(parse_opspec(to_string(s)).stages.size() == 2);
    CHECK(to_string(parse_opspec(to_string(s))) == to_string(s));

    CHECK(build_operator("id", {4, 4}).kind() == DegradationKind::identity);
    CHECK(build_operator("down:s=2", {4, 6}).out_dims() == Dims{2, 3});
    const auto comp = build_operator("blur:sigma=1.0+down:s=2", {8, 8});
    CHECK(comp.kind() == DegradationKind::composite);
    CHECK(comp.children().size() == 2);
    CHECK(comp.children()[0].kernel().size == 5);
    CHECK(comp.children()[0].wiener_gamma() == kDefaultWienerGamma);
    CHECK(infer_input_dims(parse_opspec("blur:sigma=1.0+down:s=2"), {16, 8}) == Dims{32, 16});
}

TEST_CASE("operator spec errors carry the column") {
    auto column = [](const char* text) -> std::size_t {
        try {
            parse_opspec(text);
        } catch (const ParseError& e) {
            return e.position();
        }
        return 9999;
    };
    CHECK(column("bogus") == 0);
    CHECK(column("down:s=2+xyz") == 9);
    CHECK(column("blur:sigma=abc") == 11);
    CHECK(column("down:q=2") == 5);
    CHECK(column("") == 0);
    CHECK_THROWS_AS(build_operator("down:s=3", {4, 4}), DimensionError);
}
