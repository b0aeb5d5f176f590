// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace degfuse {

struct Dims {
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t count() const noexcept { return height * width; }
    bool operator==(const Dims&) const = default;
};

std::string to_string(const Dims& d);

/// Row-major H x W grid of real intensities. Nominal range is [0, 1] but
/// nothing here clamps: operators work on unclamped reals.
class ImagePlane {
public:
    ImagePlane() = default;
    ImagePlane(std::size_t height, std::size_t width, double fill = 0.0);
    ImagePlane(Dims dims, double fill = 0.0) : ImagePlane(dims.height, dims.width, fill) {}
    ImagePlane(std::size_t height, std::size_t width, std::vector<double> data);

    std::size_t height() const noexcept { return m_dims.height; }
    std::size_t width() const noexcept { return m_dims.width; }
    Dims dims() const noexcept { return m_dims; }
    std::size_t size() const noexcept { return m_data.size(); }
    bool empty() const noexcept { return m_data.empty(); }

    double& operator()(std::size_t row, std::size_t col) { return m_data[row * m_dims.width + col]; }
    double operator()(std::size_t row, std::size_t col) const { return m_data[row * m_dims.width + col]; }
    double& operator[](std::size_t i) { return m_data[i]; }
    double operator[](std::size_t i) const { return m_data[i]; }

    std::span<double> values() noexcept { return m_data; }
    std::span<const double> values() const noexcept { return m_data; }

    ImagePlane& operator+=(const ImagePlane& other);
    ImagePlane& operator-=(const ImagePlane& other);
    ImagePlane& operator*=(double scale);

    bool operator==(const ImagePlane&) const = default;

private:
    Dims m_dims;
    std::vector<double> m_data;
};

ImagePlane operator+(ImagePlane a, const ImagePlane& b);
ImagePlane operator-(ImagePlane a, const ImagePlane& b);
ImagePlane operator*(ImagePlane a, double s);
ImagePlane operator*(double s, ImagePlane a);

/// Elementwise product.
ImagePlane hadamard(const ImagePlane& a, const ImagePlane& b);
/// a*x + b*y elementwise.
ImagePlane lincomb(double a, const ImagePlane& x, double b, const ImagePlane& y);

ImagePlane transpose(const ImagePlane& img);
ImagePlane clamp01(const ImagePlane& img);
ImagePlane unit_image(Dims dims, std::size_t index);

double mean(const ImagePlane& img);
double max_abs(const ImagePlane& img);
double max_abs_diff(const ImagePlane& a, const ImagePlane& b);
bool all_finite(const ImagePlane& img);

/// Throws DimensionError naming `context` when the two shapes differ.
void require_same_dims(Dims a, Dims b, const char* context);

}  // namespace degfuse
