// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace degfuse {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void radix2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        // Twiddles evaluated directly rather than by recurrence to avoid drift.
        std::vector<Complex> tw(half);
        for (std::size_t k = 0; k < half; ++k) {
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
            tw[k] = Complex(std::cos(ang), std::sin(ang));
        }
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + half] * tw[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

void bluestein(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    const std::size_t m = next_power_of_two(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;

    std::vector<Complex> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small and exact.
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = Complex(std::cos(ang), std::sin(ang));
    }

    std::vector<Complex> x(m), y(m);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);

    radix2(x, false);
    radix2(y, false);
    for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
    radix2(x, true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * inv_m * chirp[k];
}

}  // namespace

void fft(std::vector<Complex>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    if (is_power_of_two(n)) {
        radix2(data, inverse);
    } else {
        bluestein(data, inverse);
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (Complex& v : data) v *= s;
    }
}

void fft2d(std::vector<Complex>& data, Dims dims, bool inverse) {
    if (data.size() != dims.count()) throw std::invalid_argument("fft2d: buffer size does not match dims");
    std::vector<Complex> line(dims.width);
    for (std::size_t r = 0; r < dims.height; ++r) {
        for (std::size_t c = 0; c < dims.width; ++c) line[c] = data[r * dims.width + c];
        fft(line, inverse);
        for (std::size_t c = 0; c < dims.width; ++c) data[r * dims.width + c] = line[c];
    }
    line.resize(dims.height);
    for (std::size_t c = 0; c < dims.width; ++c) {
        for (std::size_t r = 0; r < dims.height; ++r) line[r] = data[r * dims.width + c];
        fft(line, inverse);
        for (std::size_t r = 0; r < dims.height; ++r) data[r * dims.width + c] = line[r];
    }
}

std::vector<Complex> fft2d(const ImagePlane& img) {
    std::vector<Complex> spec(img.values().begin(), img.values().end());
    fft2d(spec, img.dims(), false);
    return spec;
}

ImagePlane ifft2d_real(std::vector<Complex> spectrum, Dims dims) {
    fft2d(spectrum, dims, true);
    ImagePlane out(dims);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum[i].real();
    return out;
}

}  // namespace degfuse
