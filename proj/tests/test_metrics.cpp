// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "degfuse/metrics.hpp"
#include "support/oracles.hpp"

using namespace degfuse;

namespace {

ImagePlane checkerboard(Dims d, double lo = 0.0, double hi = 1.0) {
    ImagePlane p(d);
    for (std::size_t r = 0; r < d.height; ++r)
        for (std::size_t c = 0; c < d.width; ++c) p(r, c) = (r + c) % 2 ? hi : lo;
    return p;
}

/// The sigmoid preservation model evaluated at ratio 1 and zero angle difference.
double perfect_preservation() {
    const double qg = 0.9994 / (1.0 + std::exp(-15.0 * (1.0 - 0.5)));
    const double qa = 0.9879 / (1.0 + std::exp(-22.0 * (1.0 - 0.8)));
    return qg * qa;
}

}  // namespace

TEST_CASE("ssim of an image with itself is one") {
    SeededRng rng(1);
    const ImagePlane x = oracle::random_plane({16, 12}, rng);
    CHECK(ssim(x, x) == 1.0);
}

TEST_CASE("ssim of a checkerboard against its negative") {
    const ImagePlane x = checkerboard({16, 16});
    const ImagePlane y = checkerboard({16, 16}, 1.0, 0.0);
    // Every 8x8 window has mu = 1/2, sigma^2 = 1/4, cov = -1/4: luminance term 1,
    // contrast-structure term (C2 - 1/2) / (1/2 + C2).
    const double expected = (kSsimC2 - 0.5) / (0.5 + kSsimC2);
    CHECK(ssim(x, y) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ssim(x, y) < -0.996);
}

TEST_CASE("ssim of two constants reduces to the luminance term") {
    const double a = 0.3, b = 0.8;
    const double expected = (2 * a * b + kSsimC1) / (a * a + b * b + kSsimC1);
    CHECK(ssim(ImagePlane(9, 10, a), ImagePlane(9, 10, b)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("ssim symmetry, shift stability and size guard") {
    SeededRng rng(2);
    const ImagePlane a = oracle::random_plane({12, 12}, rng), b = oracle::random_plane({12, 12}, rng);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-15));

    // With equal local means the luminance term is 1 in every window, so a common shift
    // leaves the score unchanged.
    const ImagePlane c = a + 0.05 * checkerboard({12, 12}, -1.0, 1.0);
    const double before = ssim(a, c);
    const double after = ssim(a + ImagePlane({12, 12}, 0.37), c + ImagePlane({12, 12}, 0.37));
    CHECK(before < 1.0);
    CHECK(std::abs(after - before) < 1e-9);

    CHECK_THROWS(ssim(ImagePlane(7, 9), ImagePlane(7, 9)));
    CHECK_THROWS(ssim(ImagePlane(9, 9), ImagePlane(9, 8)));
}

TEST_CASE("ssim gradient matches finite differences") {
    SeededRng rng(5);
    const ImagePlane a = oracle::random_plane({10, 9}, rng), b = oracle::random_plane({10, 9}, rng);
    const ImagePlane g = ssim_gradient(a, b);
    for (std::size_t i = 0; i < a.size(); i += 7) {
        ImagePlane p = a, m = a;
        p[i] += 1e-6;
        m[i] -= 1e-6;
        const double fd = (ssim(p, b) - ssim(m, b)) / 2e-6;
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("mutual information agrees with a brute-force histogram") {
    SeededRng rng(7);
    const ImagePlane a = oracle::random_plane({24, 24}, rng);
    ImagePlane b = a;
    for (double& v : b.values()) v = std::clamp(0.7 * v + rng.uniform(0.0, 0.3), 0.0, 1.0);
    CHECK(mutual_information(a, b) == doctest::Approx(oracle::brute_force_mi(a, b)).epsilon(1e-10));
    CHECK(mutual_information(a, a) == doctest::Approx(entropy(a)).epsilon(1e-12));
}

TEST_CASE("q_mi examples") {
    SeededRng rng(9);
    const ImagePlane a = oracle::random_plane({32, 32}, rng);
    CHECK(q_mi(a, a, a) == doctest::Approx(2.0).epsilon(1e-14));

    const ImagePlane s1 = oracle::random_plane({256, 256}, rng), s2 = oracle::random_plane({256, 256}, rng);
    const ImagePlane f = oracle::random_plane({256, 256}, rng);
    CHECK(q_mi(s1, s2, f) < 0.1);

    const MiScore deg = q_mi_detailed(ImagePlane(8, 8, 0.2), ImagePlane(8, 8, 0.4), ImagePlane(8, 8, 0.6));
    CHECK(deg.degenerate);
    CHECK(deg.value == 0.0);
}

TEST_CASE("q_mi is symmetric and prefers the source over noise") {
    SeededRng rng(10);
    int wins = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const ImagePlane a = oracle::random_plane({32, 32}, rng), b = oracle::random_plane({32, 32}, rng);
        const ImagePlane noise = oracle::random_plane({32, 32}, rng);
        CHECK(q_mi(a, b, noise) == doctest::Approx(q_mi(b, a, noise)).epsilon(1e-14));
        wins += q_mi(a, b, a) >= q_mi(a, b, noise);
    }
    CHECK(wins >= 18);
}

TEST_CASE("q_abf of a perfect copy equals the sigmoid ceiling") {
    SeededRng rng(12);
    const ImagePlane a = oracle::random_plane({16, 16}, rng);
    CHECK(q_abf(a, a, a) == doctest::Approx(perfect_preservation()).epsilon(1e-12));
}

TEST_CASE("q_abf of a constant fusion against textured sources") {
    SeededRng rng(13);
    const ImagePlane a = oracle::random_plane({16, 16}, rng), b = oracle::random_plane({16, 16}, rng);
    CHECK(q_abf(a, b, ImagePlane(16, 16, 0.5)) < 0.05);
    CHECK(q_abf(a, b, ImagePlane(16, 16, 0.5)) >= 0.0);
}

TEST_CASE("q_abf range and symmetry") {
    SeededRng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const ImagePlane a = oracle::random_plane({12, 12}, rng), b = oracle::random_plane({12, 12}, rng);
        const ImagePlane f = oracle::random_plane({12, 12}, rng, -0.5, 1.5);
        const double q = q_abf(a, b, f);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        CHECK(q == doctest::Approx(q_abf(b, a, f)).epsilon(1e-14));
    }
    CHECK(q_abf(ImagePlane(5, 5, 0.125), ImagePlane(5, 5, 0.875), ImagePlane(5, 5, 0.5)) == 0.0);
}

TEST_CASE("evaluate_fusion collects every score") {
    SeededRng rng(15);
    const ImagePlane a = oracle::random_plane({16, 16}, rng), b = oracle::random_plane({16, 16}, rng);
    const ImagePlane f = lincomb(0.5, a, 0.5, b);
    const MetricReport r = evaluate_fusion(a, b, f);
    CHECK(r.q_mi == q_mi(a, b, f));
    CHECK(r.q_abf == q_abf(a, b, f));
    CHECK(r.ssim_src1 == ssim(f, a));
    CHECK(r.ssim() == doctest::Approx(0.5 * (ssim(f, a) + ssim(f, b))));
}
