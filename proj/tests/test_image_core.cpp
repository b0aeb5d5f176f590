// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "degfuse/errors.hpp"
#include "degfuse/fft.hpp"
#include "degfuse/image.hpp"
#include "degfuse/pgm.hpp"
#include "degfuse/rng.hpp"
#include "degfuse/sobel.hpp"
#include "support/oracles.hpp"

using namespace degfuse;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "degfuse_image_core";
    fs::create_directories(dir);
    return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

PgmError::Code load_error(const fs::path& p) {
    try {
        load_pgm(p);
    } catch (const PgmError& e) {
        return e.code();
    }
    FAIL("expected a PgmError");
    return PgmError::Code::missing_file;
}

}  // namespace

TEST_CASE("image plane basics") {
    ImagePlane a(2, 3, 1.5);
    CHECK(a.dims() == Dims{2, 3});
    CHECK(a.size() == 6);
    a(1, 2) = 4.0;
    CHECK(a[5] == 4.0);
    CHECK(transpose(a)(2, 1) == 4.0);
    CHECK(mean(ImagePlane(2, 2, std::vector<double>{1, 2, 3, 4})) == doctest::Approx(2.5));
    CHECK_THROWS_AS(ImagePlane(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(a += ImagePlane(3, 2), DimensionError);
    const ImagePlane c = clamp01(ImagePlane(1, 3, std::vector<double>{-0.2, 0.4, 1.7}));
    CHECK(c == ImagePlane(1, 3, std::vector<double>{0.0, 0.4, 1.0}));
}

TEST_CASE("load_pgm rescales a P2 file by maxval") {
    const fs::path p = scratch("p2.pgm");
    write_bytes(p, "P2\n# a comment\n2 2\n255\n0 255\n128 64\n");
    const ImagePlane img = load_pgm(p);
    REQUIRE(img.dims() == Dims{2, 2});
    CHECK(img[0] == 0.0);
    CHECK(img[1] == 1.0);
    CHECK(img[2] == 128.0 / 255.0);
    CHECK(img[3] == 64.0 / 255.0);
}

TEST_CASE("load_pgm diagnostics are distinct") {
    CHECK(load_error(scratch("does_not_exist.pgm")) == PgmError::Code::missing_file);

    const fs::path p3 = scratch("p3.pgm");
    write_bytes(p3, "P3\n1 1\n255\n0 0 0\n");
    CHECK(load_error(p3) == PgmError::Code::unsupported_magic);
    try {
        load_pgm(p3);
    } catch (const PgmError& e) {
        CHECK(std::string(e.what()).find("unsupported magic") != std::string::npos);
    }

    const fs::path bad = scratch("bad_header.pgm");
    write_bytes(bad, "P5\nxx 2\n255\n");
    CHECK(load_error(bad) == PgmError::Code::malformed_header);

    const fs::path trunc = scratch("truncated.pgm");
    write_bytes(trunc, std::string("P5\n2 2\n255\n") + std::string(3, '\x10'));
    CHECK(load_error(trunc) == PgmError::Code::truncated_payload);
}

TEST_CASE("save_pgm quantization and clamping") {
    const fs::path p = scratch("bytes.pgm");
    save_pgm(ImagePlane(1, 4, std::vector<double>{0.0, 1.0, 1.7, 0.5}), p);
    const std::string bytes = read_bytes(p);
    const std::string payload = bytes.substr(bytes.size() - 4);
    CHECK(static_cast<unsigned char>(payload[0]) == 0x00);
    CHECK(static_cast<unsigned char>(payload[1]) == 0xFF);
    CHECK(static_cast<unsigned char>(payload[2]) == 0xFF);
    CHECK(static_cast<unsigned char>(payload[3]) == 128);
    CHECK_THROWS_AS(save_pgm(ImagePlane(1, 1), p, 1000), PgmError);
    CHECK_THROWS_AS(save_pgm(ImagePlane(1, 1), scratch("no_such_dir") / "x" / "y.pgm"), PgmError);
}

TEST_CASE("pgm round trip stays within half a quantization step") {
    SeededRng rng(3);
    const ImagePlane img = oracle::random_plane({17, 9}, rng);
    for (int maxval : {255, 65535}) {
        const fs::path p = scratch("round_" + std::to_string(maxval) + ".pgm");
        save_pgm(img, p, maxval);
        const ImagePlane back = load_pgm(p);
        CHECK(max_abs_diff(back, img) <= 0.5 / maxval + 1e-15);
        save_pgm(back, scratch("again.pgm"), maxval);
        CHECK(read_bytes(scratch("again.pgm")) == read_bytes(p));
    }
}

TEST_CASE("seeded rng is deterministic and roughly uniform") {
    SeededRng a(99), b(99), c(100);
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        any_diff = any_diff || x != c.next_u64();
    }
    CHECK(any_diff);
    SeededRng r(5);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 20000 - 0.5) < 3 * std::sqrt(1.0 / 12.0 / 20000));
    for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
}

TEST_CASE("gaussian_noise statistics and determinism") {
    const ImagePlane img(64, 64, 0.5);
    SeededRng r0(1);
    CHECK(gaussian_noise(img, 0.0, r0) == img);

    SeededRng r1(11), r2(11);
    const ImagePlane n1 = gaussian_noise(img, 0.1, r1);
    CHECK(n1 == gaussian_noise(img, 0.1, r2));

    double m = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n1.size(); ++i) m += n1[i] - 0.5;
    m /= static_cast<double>(n1.size());
    for (std::size_t i = 0; i < n1.size(); ++i) s2 += (n1[i] - 0.5 - m) * (n1[i] - 0.5 - m);
    const double sd = std::sqrt(s2 / static_cast<double>(n1.size() - 1));
    CHECK(std::abs(m) <= 0.1 * 3.0 / 64.0);
    CHECK(std::abs(sd - 0.1) <= 0.05 * 0.1);

    SeededRng r3(2);
    CHECK_THROWS(gaussian_noise(img, -1.0, r3));
    SeededRng r4(4);
    const ImagePlane big = gaussian_noise(ImagePlane(8, 8, 0.99), 1.0, r4);
    bool outside = false;
    for (double v : big.values()) outside = outside || v > 1.0 || v < 0.0;
    CHECK(outside);
}

TEST_CASE("sobel on constants, steps and transposes") {
    const Gradient flat = sobel_gradient(ImagePlane(5, 5, 0.625));
    CHECK(max_abs(flat.gx) == 0.0);
    CHECK(max_abs(flat.gy) == 0.0);
    CHECK(max_abs(flat.magnitude) == 0.0);

    ImagePlane step(6, 6);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 3; c < 6; ++c) step(r, c) = 1.0;
    const Gradient g = sobel_gradient(step);
    for (std::size_t r = 1; r < 5; ++r) {
        // The 3-wide stencil centred on column 2 sees (0, _, 1) in each row: (1 + 2 + 1) / 4.
        CHECK(std::abs(g.gx(r, 2)) == doctest::Approx(1.0));
        CHECK(std::abs(g.gx(r, 3)) == doctest::Approx(1.0));
        CHECK(g.gy(r, 2) == 0.0);
        CHECK(g.gx(r, 0) == 0.0);
    }

    SeededRng rng(8);
    const ImagePlane img = oracle::random_plane({7, 5}, rng);
    const Gradient a = sobel_gradient(img), b = sobel_gradient(transpose(img));
    CHECK(max_abs_diff(b.gx, transpose(a.gy)) <= 1e-15);
    CHECK(max_abs_diff(b.gy, transpose(a.gx)) <= 1e-15);

    const Gradient scaled = sobel_gradient(3.5 * img);
    CHECK(max_abs_diff(scaled.gx, 3.5 * a.gx) <= 1e-12 * (1.0 + max_abs(scaled.gx)));
    CHECK(max_abs_diff(scaled.magnitude, 3.5 * a.magnitude) <= 1e-12 * (1.0 + max_abs(scaled.magnitude)));

    CHECK_THROWS_AS(sobel_gradient(ImagePlane(2, 5)), std::invalid_argument);
}

TEST_CASE("sobel_adjoint is the transpose of the gradient map") {
    SeededRng rng(21);
    const Dims d{6, 9};
    const ImagePlane x = oracle::random_plane(d, rng, -1, 1);
    const ImagePlane u = oracle::random_plane(d, rng, -1, 1), v = oracle::random_plane(d, rng, -1, 1);
    const Gradient g = sobel_gradient(x);
    double lhs = 0.0, rhs = 0.0;
    const ImagePlane adj = sobel_adjoint(u, v);
    for (std::size_t i = 0; i < x.size(); ++i) {
        lhs += g.gx[i] * u[i] + g.gy[i] * v[i];
        rhs += x[i] * adj[i];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("fft agrees with the direct DFT for power-of-two and other sizes") {
    SeededRng rng(4);
    for (Dims d : {Dims{4, 8}, Dims{5, 7}, Dims{6, 3}, Dims{1, 12}}) {
        std::vector<Complex> x(d.count());
        for (auto& v : x) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        std::vector<Complex> fast = x;
        fft2d(fast, d);
        const auto slow = oracle::naive_dft2d(x, d);
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
        CHECK(err <= 1e-10);
        fft2d(fast, d, true);
        double back = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) back = std::max(back, std::abs(fast[i] - x[i]));
        CHECK(back <= 1e-12);
    }
    const ImagePlane img = oracle::random_plane({6, 10}, rng);
    CHECK(max_abs_diff(ifft2d_real(fft2d(img), img.dims()), img) <= 1e-12);
}
