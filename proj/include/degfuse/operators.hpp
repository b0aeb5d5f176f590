// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "degfuse/fft.hpp"
#include "degfuse/image.hpp"

namespace degfuse {

inline constexpr double kDefaultWienerGamma = 1e-3;

/// Square stencil of odd side; weights row-major, centre at (size/2, size/2).
struct BlurKernel {
    std::size_t size = 1;
    std::vector<double> weights{1.0};

    double at(std::size_t r, std::size_t c) const { return weights[r * size + c]; }
};

/// Isotropic Gaussian renormalized to sum 1. A size of 0 picks 2*ceil(2*sigma)+1.
BlurKernel gaussian_kernel(double sigma, std::size_t size = 0);

enum class DegradationKind { identity, blur, downsample, composite };

/// A linear degradation A mapping a clean H x W plane to an observation,
/// paired with an applier for its generalized inverse A-dagger.
///
/// Blur is circular convolution, so it is diagonalized by the 2-D DFT and its
/// inverse is the Wiener response conj(H) / (|H|^2 + gamma); frequencies where
/// that denominator vanishes (only possible with gamma = 0) map to zero, which
/// makes gamma = 0 the exact Moore-Penrose inverse. Downsample is the s x s
/// block mean; its inverse replicates each low-resolution pixel over its block.
/// Composites apply children left to right and their inverses right to left.
///
/// Immutable after construction and cheap to copy.
class LinearDegradation {
public:
    static LinearDegradation identity(Dims dims);
    static LinearDegradation blur(Dims dims, BlurKernel kernel, double wiener_gamma = kDefaultWienerGamma);
    static LinearDegradation downsample(Dims dims, std::size_t scale);
    static LinearDegradation composite(std::vector<LinearDegradation> children);

    DegradationKind kind() const noexcept { return m_kind; }
    Dims in_dims() const noexcept { return m_in; }
    Dims out_dims() const noexcept { return m_out; }
    const BlurKernel& kernel() const noexcept { return m_kernel; }
    double wiener_gamma() const noexcept { return m_gamma; }
    std::size_t scale() const noexcept { return m_scale; }
    const std::vector<LinearDegradation>& children() const noexcept { return m_children; }

    ImagePlane apply(const ImagePlane& x) const;
    ImagePlane apply_pinv(const ImagePlane& y) const;
    /// A^T, used by the orthogonal-projection oracle.
    ImagePlane apply_transpose(const ImagePlane& y) const;
    /// (A-dagger)^T, used when backpropagating through the correction step.
    ImagePlane apply_pinv_transpose(const ImagePlane& x) const;

    /// Squared norm of any row of A. Every operator kind here is invariant
    /// under output-grid translation, so all rows share this value.
    double row_norm_sq() const;

    std::string describe() const;

private:
    LinearDegradation() = default;

    ImagePlane blur_direct(const ImagePlane& x, bool transposed) const;
    ImagePlane blur_spectral(const ImagePlane& x, bool conjugate, bool wiener) const;

    DegradationKind m_kind = DegradationKind::identity;
    Dims m_in;
    Dims m_out;
    BlurKernel m_kernel;
    double m_gamma = 0.0;
    std::size_t m_scale = 1;
    std::vector<LinearDegradation> m_children;
    std::shared_ptr<const std::vector<Complex>> m_spectrum;

    friend ImagePlane blur_via_fft(const LinearDegradation& op, const ImagePlane& x);
};

/// Frequency-domain evaluation of a blur operator's forward map; an
/// independent route to LinearDegradation::apply for blur kinds.
ImagePlane blur_via_fft(const LinearDegradation& op, const ImagePlane& x);

inline ImagePlane apply(const LinearDegradation& op, const ImagePlane& x) { return op.apply(x); }
inline ImagePlane apply_pinv(const LinearDegradation& op, const ImagePlane& y) { return op.apply_pinv(y); }

}  // namespace degfuse
