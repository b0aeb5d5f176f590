// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/image.hpp"

#include <algorithm>
#include <cmath>

#include "degfuse/errors.hpp"

namespace degfuse {

std::string to_string(const Dims& d) {
    return std::to_string(d.height) + "x" + std::to_string(d.width);
}

ImagePlane::ImagePlane(std::size_t height, std::size_t width, double fill)
    : m_dims{height, width}, m_data(height * width, fill) {}

ImagePlane::ImagePlane(std::size_t height, std::size_t width, std::vector<double> data)
    : m_dims{height, width}, m_data(std::move(data)) {
    if (m_data.size() != height * width) {
        throw DimensionError("image data length " + std::to_string(m_data.size()) +
                             " does not match " + to_string(m_dims));
    }
}

ImagePlane& ImagePlane::operator+=(const ImagePlane& other) {
    require_same_dims(m_dims, other.m_dims, "image +=");
    for (std::size_t i = 0; i < m_data.size(); ++i) m_data[i] += other.m_data[i];
    return *this;
}

ImagePlane& ImagePlane::operator-=(const ImagePlane& other) {
    require_same_dims(m_dims, other.m_dims, "image -=");
    for (std::size_t i = 0; i < m_data.size(); ++i) m_data[i] -= other.m_data[i];
    return *this;
}

ImagePlane& ImagePlane::operator*=(double scale) {
    for (double& v : m_data) v *= scale;
    return *this;
}

ImagePlane operator+(ImagePlane a, const ImagePlane& b) { return a += b; }
ImagePlane operator-(ImagePlane a, const ImagePlane& b) { return a -= b; }
ImagePlane operator*(ImagePlane a, double s) { return a *= s; }
ImagePlane operator*(double s, ImagePlane a) { return a *= s; }

ImagePlane hadamard(const ImagePlane& a, const ImagePlane& b) {
    require_same_dims(a.dims(), b.dims(), "hadamard");
    ImagePlane out(a.dims());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

ImagePlane lincomb(double a, const ImagePlane& x, double b, const ImagePlane& y) {
    require_same_dims(x.dims(), y.dims(), "lincomb");
    ImagePlane out(x.dims());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

ImagePlane transpose(const ImagePlane& img) {
    ImagePlane out(img.width(), img.height());
    for (std::size_t r = 0; r < img.height(); ++r)
        for (std::size_t c = 0; c < img.width(); ++c) out(c, r) = img(r, c);
    return out;
}

ImagePlane clamp01(const ImagePlane& img) {
    ImagePlane out = img;
    for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
    return out;
}

ImagePlane unit_image(Dims dims, std::size_t index) {
    ImagePlane out(dims);
    out[index] = 1.0;
    return out;
}

double mean(const ImagePlane& img) {
    if (img.empty()) return 0.0;
    double s = 0.0;
    for (double v : img.values()) s += v;
    return s / static_cast<double>(img.size());
}

double max_abs(const ImagePlane& img) {
    double m = 0.0;
    for (double v : img.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const ImagePlane& a, const ImagePlane& b) {
    require_same_dims(a.dims(), b.dims(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool all_finite(const ImagePlane& img) {
    return std::all_of(img.values().begin(), img.values().end(),
                       [](double v) { return std::isfinite(v); });
}

void require_same_dims(Dims a, Dims b, const char* context) {
    if (a != b) {
        throw DimensionError(std::string(context) + ": dimension mismatch " + to_string(a) +
                             " vs " + to_string(b));
    }
}

}  // namespace degfuse
