// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "degfuse/errors.hpp"
#include "degfuse/joint.hpp"
#include "support/oracles.hpp"

using namespace degfuse;

namespace {

ImagePlane scalar(double v) { return ImagePlane(1, 1, v); }

JointState scalar_state(double a, double b, double c) { return {scalar(a), scalar(b), scalar(c)}; }

JointOperator scalar_identity(double w1) {
    return JointOperator(LinearDegradation::identity({1, 1}), LinearDegradation::identity({1, 1}), scalar(w1));
}

JointObservation range_consistent(const JointOperator& j, SeededRng& rng) {
    const JointState truth = oracle::random_state(j.clean_dims(), rng);
    return JointObservation::from_sources(j.a1().apply(truth.x1), j.a2().apply(truth.x2), j.clean_dims());
}

JointOperator random_exact_joint(Dims d, SeededRng& rng) {
    return JointOperator(oracle::random_exact_operator(d, rng), oracle::random_exact_operator(d, rng),
                         oracle::random_plane(d, rng));
}

double distance(const JointState& a, const JointState& b) { return norm(a - b); }

}  // namespace

TEST_CASE("joint_apply scalar case") {
    const JointObservation o = joint_apply(scalar_identity(0.6), scalar_state(2, 5, 3.2));
    CHECK(o.y1[0] == 2.0);
    CHECK(o.y2[0] == 5.0);
    CHECK(std::abs(o.y3[0]) <= 1e-15);
}

TEST_CASE("joint_apply vanishes on the fusion row for fused states") {
    SeededRng rng(1);
    const Dims d{5, 6};
    const ImagePlane w = oracle::random_plane(d, rng);
    const JointOperator j(LinearDegradation::identity(d), LinearDegradation::identity(d), w);
    JointState s{oracle::random_plane(d, rng), oracle::random_plane(d, rng), {}};
    s.xf = ImagePlane(d);
    for (std::size_t i = 0; i < s.xf.size(); ++i) s.xf[i] = w[i] * s.x1[i] + (1.0 - w[i]) * s.x2[i];
    CHECK(max_abs(joint_apply(j, s).y3) <= 1e-12);
}

TEST_CASE("materialized joint operator equals the assembled block matrix") {
    SeededRng rng(2);
    const Dims d{2, 2};
    const auto a1 = LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0);
    const auto a2 = LinearDegradation::downsample(d, 2);
    const ImagePlane w = oracle::random_plane(d, rng);
    const JointOperator j(a1, a2, w);
    CHECK(max_abs_diff(materialize_joint(j), oracle::assemble_joint(materialize(a1), materialize(a2), w)) == 0.0);
}

TEST_CASE("joint_pinv_apply scalar case and linearity") {
    const JointState s = joint_pinv_apply(scalar_identity(0.6), JointObservation{scalar(2), scalar(5), scalar(0)});
    CHECK(s.x1[0] == 2.0);
    CHECK(s.x2[0] == 5.0);
    CHECK(s.xf[0] == doctest::Approx(3.2).epsilon(1e-15));
    const JointState z = joint_pinv_apply(scalar_identity(0.6), JointObservation{scalar(0), scalar(0), scalar(0)});
    CHECK(z == scalar_state(0, 0, 0));
}

TEST_CASE("implicit pinv equals the SVD pinv for invertible blurs") {
    SeededRng rng(3);
    const Dims d{4, 4};
    for (int trial = 0; trial < 3; ++trial) {
        const JointOperator j(LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0),
                              LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0),
                              oracle::random_plane(d, rng));
        CHECK(max_abs_diff(materialize_joint_pinv(j), svd_pinv(materialize_joint(j))) <= 1e-8);
    }
}

TEST_CASE("correct scalar example") {
    const JointState out = correct(scalar_state(1, 1, 1), scalar_identity(0.5),
                                   JointObservation{scalar(2), scalar(4), scalar(0)});
    CHECK(out.x1[0] == 2.0);
    CHECK(out.x2[0] == 4.0);
    CHECK(out.xf[0] == 3.0);
}

TEST_CASE("correct leaves consistent estimates untouched") {
    SeededRng rng(4);
    const Dims d{4, 4};
    const JointOperator j = random_exact_joint(d, rng);
    JointState est = oracle::random_state(d, rng);
    for (std::size_t i = 0; i < est.xf.size(); ++i) est.xf[i] = j.w1()[i] * est.x1[i] + j.w2_at(i) * est.x2[i];
    const JointObservation o = JointObservation::from_sources(j.a1().apply(est.x1), j.a2().apply(est.x2), d);
    CHECK(max_abs_diff(correct(est, j, o), est) <= 1e-15);
}

TEST_CASE("correct is idempotent on random exact instances") {
    SeededRng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Dims d{4, 4};
        const JointOperator j = random_exact_joint(d, rng);
        const JointObservation o = range_consistent(j, rng);
        const JointState once = correct(oracle::random_state(d, rng), j, o);
        CHECK(max_abs_diff(correct(once, j, o), once) <= 1e-10);
    }
}

TEST_CASE("correction scale") {
    CHECK(CorrectionScale::for_step(0.6, 0.0).value == 1.0);
    const double s = CorrectionScale::for_step(0.6, 0.1).value;
    CHECK(s == doctest::Approx(std::sqrt(0.4) / (std::sqrt(0.4) + 0.1)));
    CHECK(CorrectionScale::for_step(0.6, 0.5).value < s);
    CHECK_THROWS(CorrectionScale::for_step(0.6, -0.1));

    SeededRng rng(6);
    const Dims d{4, 4};
    const JointOperator j = random_exact_joint(d, rng);
    const JointObservation o = range_consistent(j, rng);
    const JointState est = oracle::random_state(d, rng);
    CHECK(correct(est, j, o, CorrectionScale::for_step(0.3, 0.0)) == correct(est, j, o));
    const JointState half = correct(est, j, o, CorrectionScale{0.0, 0.5});
    CHECK(max_abs_diff(half, 0.5 * (est + correct(est, j, o))) <= 1e-12);
}

TEST_CASE("cg_project scalar case") {
    const JointState z = cg_project(scalar_state(1, 1, 1), scalar_identity(0.5),
                                    JointObservation{scalar(2), scalar(4), scalar(0)});
    CHECK(z.x1[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(z.x2[0] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(z.xf[0] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("cg_project agrees with correct when the blocks are invertible") {
    SeededRng rng(7);
    const Dims d{4, 4};
    for (int trial = 0; trial < 5; ++trial) {
        const JointOperator j(LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0),
                              LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0),
                              oracle::random_plane(d, rng));
        const JointObservation o = range_consistent(j, rng);
        const JointState est = oracle::random_state(d, rng);
        CHECK(max_abs_diff(cg_project(est, j, o), correct(est, j, o)) <= 1e-6);
    }
}

TEST_CASE("cg_project is the closer feasible point under downsampling") {
    SeededRng rng(8);
    const Dims d{4, 4};
    for (int trial = 0; trial < 5; ++trial) {
        const JointOperator j(LinearDegradation::downsample(d, 2), LinearDegradation::identity(d),
                              oracle::random_plane(d, rng));
        const JointObservation o = range_consistent(j, rng);
        const JointState est = oracle::random_state(d, rng);
        const CgResult cg = cg_project_detailed(est, j, o);
        const JointState pr = correct(est, j, o);
        CHECK(cg.residual_inf <= 1e-8);
        const JointObservation r_cg = joint_apply(j, cg.state) - o;
        const JointObservation r_pr = joint_apply(j, pr) - o;
        CHECK(std::max({max_abs(r_cg.y1), max_abs(r_cg.y2), max_abs(r_cg.y3)}) <= 1e-8);
        CHECK(std::max({max_abs(r_pr.y1), max_abs(r_pr.y2), max_abs(r_pr.y3)}) <= 1e-10);
        CHECK(distance(cg.state, est) <= distance(pr, est) + 1e-10);
    }
}

TEST_CASE("cg_project reports stagnation") {
    SeededRng rng(9);
    const Dims d{4, 4};
    const JointOperator j(LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0),
                          LinearDegradation::identity(d), oracle::random_plane(d, rng));
    const JointObservation o = range_consistent(j, rng);
    CHECK_THROWS_AS(cg_project(oracle::random_state(d, rng), j, o, 1e-14, 1), NumericalError);
}

TEST_CASE("Moore-Penrose conditions of the joint operator") {
    SeededRng rng(10);
    const Dims d{4, 4};
    const ImagePlane w = oracle::random_plane(d, rng);
    CHECK(check_mp_conditions(JointOperator(LinearDegradation::identity(d), LinearDegradation::identity(d), w), 1e-12)
              .all_pass());

    const auto blur = LinearDegradation::blur(d, oracle::centre_heavy_kernel(rng), 0.0);
    CHECK(check_mp_conditions(JointOperator(blur, blur, w), 1e-8).all_pass());

    const ConditionReport rep =
        check_mp_conditions(JointOperator(LinearDegradation::downsample(d, 2), LinearDegradation::identity(d), w), 1e-10);
    CHECK(rep.passes(0));
    CHECK(rep.passes(1));
    CHECK(rep.passes(2));
    CHECK_FALSE(rep.passes(3));
    CHECK(rep.deviation[3] > 1e-3);
}

TEST_CASE("post-correction fusion row and data rows") {
    SeededRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Dims d{4, 6};
        const JointOperator j = random_exact_joint(d, rng);
        const JointObservation o = range_consistent(j, rng);
        const JointState out = correct(oracle::random_state(d, rng), j, o);
        for (std::size_t i = 0; i < out.xf.size(); ++i) {
            CHECK(std::abs(out.xf[i] - j.w1()[i] * out.x1[i] - j.w2_at(i) * out.x2[i]) <= 1e-12);
        }
        CHECK(max_abs_diff(j.a1().apply(out.x1), o.y1) <= 1e-8);
        CHECK(max_abs_diff(j.a2().apply(out.x2), o.y2) <= 1e-8);
    }
}

TEST_CASE("dimension checks") {
    const Dims d{4, 4};
    CHECK_THROWS_AS(JointOperator(LinearDegradation::identity(d), LinearDegradation::identity({4, 5}), ImagePlane(d)),
                    DimensionError);
    const JointOperator j(LinearDegradation::identity(d), LinearDegradation::identity(d), ImagePlane(d, 1.7));
    CHECK(j.w1()[0] == 1.0);
    CHECK(j.w2_at(0) == 0.0);
    CHECK_THROWS_AS(joint_apply(j, {ImagePlane(d), ImagePlane(d), ImagePlane(Dims{4, 5})}), DimensionError);
}
