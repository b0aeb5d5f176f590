// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/sobel.hpp"

#include <cmath>
#include <stdexcept>

namespace degfuse {

namespace {

constexpr double kX[3][3] = {{-0.25, 0.0, 0.25}, {-0.5, 0.0, 0.5}, {-0.25, 0.0, 0.25}};
constexpr double kY[3][3] = {{-0.25, -0.5, -0.25}, {0.0, 0.0, 0.0}, {0.25, 0.5, 0.25}};

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (i >= static_cast<std::ptrdiff_t>(n)) return n - 1;
    return static_cast<std::size_t>(i);
}

void require_min_size(Dims d) {
    if (d.height < 3 || d.width < 3) {
        throw std::invalid_argument("sobel_gradient: image must be at least 3x3, got " + to_string(d));
    }
}

}  // namespace

Gradient sobel_gradient(const ImagePlane& img) {
    require_min_size(img.dims());
    const std::size_t h = img.height(), w = img.width();
    Gradient g{ImagePlane(h, w), ImagePlane(h, w), ImagePlane(h, w)};
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double sx = 0.0, sy = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                const std::size_t rr = clamp_index(static_cast<std::ptrdiff_t>(r) + dr, h);
                for (int dc = -1; dc <= 1; ++dc) {
                    const std::size_t cc = clamp_index(static_cast<std::ptrdiff_t>(c) + dc, w);
                    const double v = img(rr, cc);
                    sx += kX[dr + 1][dc + 1] * v;
                    sy += kY[dr + 1][dc + 1] * v;
                }
            }
            g.gx(r, c) = sx;
            g.gy(r, c) = sy;
            g.magnitude(r, c) = std::sqrt(sx * sx + sy * sy);
        }
    }
    return g;
}

ImagePlane sobel_adjoint(const ImagePlane& dgx, const ImagePlane& dgy) {
    require_same_dims(dgx.dims(), dgy.dims(), "sobel_adjoint");
    require_min_size(dgx.dims());
    const std::size_t h = dgx.height(), w = dgx.width();
    ImagePlane out(h, w);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            for (int dr = -1; dr <= 1; ++dr) {
                const std::size_t rr = clamp_index(static_cast<std::ptrdiff_t>(r) + dr, h);
                for (int dc = -1; dc <= 1; ++dc) {
                    const std::size_t cc = clamp_index(static_cast<std::ptrdiff_t>(c) + dc, w);
                    out(rr, cc) += kX[dr + 1][dc + 1] * dgx(r, c) + kY[dr + 1][dc + 1] * dgy(r, c);
                }
            }
        }
    }
    return out;
}

}  // namespace degfuse
