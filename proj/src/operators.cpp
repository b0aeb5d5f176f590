// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/operators.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "degfuse/errors.hpp"

namespace degfuse {

namespace {

// Below this |H|^2 + gamma a frequency is treated as annihilated by the blur.
constexpr double kSpectralCutoff = 1e-14;

std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
}

}  // namespace

BlurKernel gaussian_kernel(double sigma, std::size_t size) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    if (size == 0) size = 2 * static_cast<std::size_t>(std::ceil(2.0 * sigma)) + 1;
    if (size % 2 == 0) throw std::invalid_argument("gaussian_kernel: size must be odd");
    BlurKernel k{size, std::vector<double>(size * size)};
    const double half = static_cast<double>(size / 2);
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) {
            const double dy = static_cast<double>(r) - half, dx = static_cast<double>(c) - half;
            k.weights[r * size + c] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
    const double total = std::accumulate(k.weights.begin(), k.weights.end(), 0.0);
    for (double& w : k.weights) w /= total;
    return k;
}

LinearDegradation LinearDegradation::identity(Dims dims) {
    if (dims.count() == 0) throw DimensionError("identity: empty dimensions");
    LinearDegradation op;
    op.m_kind = DegradationKind::identity;
    op.m_in = op.m_out = dims;
    return op;
}

LinearDegradation LinearDegradation::blur(Dims dims, BlurKernel kernel, double wiener_gamma) {
    if (dims.count() == 0) throw DimensionError("blur: empty dimensions");
    if (kernel.size % 2 == 0 || kernel.weights.size() != kernel.size * kernel.size) {
        throw std::invalid_argument("blur: kernel must be square with odd side");
    }
    if (!(wiener_gamma >= 0.0)) throw std::invalid_argument("blur: wiener_gamma must be non-negative");
    const double total = std::accumulate(kernel.weights.begin(), kernel.weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("blur: kernel weights must sum to 1, got " + std::to_string(total));
    }

    LinearDegradation op;
    op.m_kind = DegradationKind::blur;
    op.m_in = op.m_out = dims;
    op.m_kernel = std::move(kernel);
    op.m_gamma = wiener_gamma;

    // Kernel centre anchored at (0,0) with periodic wrap; taps that alias onto
    // the same pixel (kernel wider than the image) accumulate.
    const auto radius = static_cast<std::ptrdiff_t>(op.m_kernel.size / 2);
    std::vector<Complex> spec(dims.count());
    for (std::size_t r = 0; r < op.m_kernel.size; ++r)
        for (std::size_t c = 0; c < op.m_kernel.size; ++c) {
            const std::size_t rr = wrap(static_cast<std::ptrdiff_t>(r) - radius, dims.height);
            const std::size_t cc = wrap(static_cast<std::ptrdiff_t>(c) - radius, dims.width);
            spec[rr * dims.width + cc] += op.m_kernel.at(r, c);
        }
    fft2d(spec, dims, false);
    op.m_spectrum = std::make_shared<const std::vector<Complex>>(std::move(spec));
    return op;
}

LinearDegradation LinearDegradation::downsample(Dims dims, std::size_t scale) {
    if (scale == 0) throw std::invalid_argument("downsample: scale must be positive");
    if (dims.count() == 0 || dims.height % scale != 0 || dims.width % scale != 0) {
        throw DimensionError("downsample: scale " + std::to_string(scale) + " does not divide " + to_string(dims));
    }
    LinearDegradation op;
    op.m_kind = DegradationKind::downsample;
    op.m_in = dims;
    op.m_out = {dims.height / scale, dims.width / scale};
    op.m_scale = scale;
    return op;
}

LinearDegradation LinearDegradation::composite(std::vector<LinearDegradation> children) {
    if (children.empty()) throw std::invalid_argument("composite: needs at least one child");
    for (std::size_t i = 1; i < children.size(); ++i) {
        if (children[i - 1].out_dims() != children[i].in_dims()) {
            throw DimensionError("composite: child " + std::to_string(i - 1) + " outputs " +
                                 to_string(children[i - 1].out_dims()) + " but child " + std::to_string(i) +
                                 " expects " + to_string(children[i].in_dims()));
        }
    }
    LinearDegradation op;
    op.m_kind = DegradationKind::composite;
    op.m_in = children.front().in_dims();
    op.m_out = children.back().out_dims();
    op.m_children = std::move(children);
    return op;
}

ImagePlane LinearDegradation::blur_direct(const ImagePlane& x, bool transposed) const {
    const Dims d = x.dims();
    const auto radius = static_cast<std::ptrdiff_t>(m_kernel.size / 2);
    ImagePlane out(d);
    for (std::size_t r = 0; r < d.height; ++r)
        for (std::size_t c = 0; c < d.width; ++c) {
            double acc = 0.0;
            for (std::size_t kr = 0; kr < m_kernel.size; ++kr) {
                const std::ptrdiff_t u = static_cast<std::ptrdiff_t>(kr) - radius;
                const std::size_t rr = wrap(static_cast<std::ptrdiff_t>(r) + (transposed ? u : -u), d.height);
                for (std::size_t kc = 0; kc < m_kernel.size; ++kc) {
                    const std::ptrdiff_t v = static_cast<std::ptrdiff_t>(kc) - radius;
                    const std::size_t cc = wrap(static_cast<std::ptrdiff_t>(c) + (transposed ? v : -v), d.width);
                    acc += m_kernel.at(kr, kc) * x(rr, cc);
                }
            }
            out(r, c) = acc;
        }
    return out;
}

ImagePlane LinearDegradation::blur_spectral(const ImagePlane& x, bool conjugate, bool wiener) const {
    std::vector<Complex> spec = fft2d(x);
    const std::vector<Complex>& h = *m_spectrum;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const Complex hi = conjugate ? std::conj(h[i]) : h[i];
        if (!wiener) {
            spec[i] *= hi;
            continue;
        }
        const double denom = std::norm(h[i]) + m_gamma;
        // Wiener response for A-dagger is conj(H)/den; its transpose uses H/den.
        spec[i] = denom <= kSpectralCutoff ? Complex{} : spec[i] * std::conj(hi) / denom;
    }
    return ifft2d_real(std::move(spec), x.dims());
}

ImagePlane LinearDegradation::apply(const ImagePlane& x) const {
    require_same_dims(x.dims(), m_in, "apply");
    switch (m_kind) {
        case DegradationKind::identity:
            return x;
        case DegradationKind::blur:
            return blur_direct(x, false);
        case DegradationKind::downsample: {
            ImagePlane out(m_out);
            const double inv = 1.0 / static_cast<double>(m_scale * m_scale);
            for (std::size_t r = 0; r < m_in.height; ++r)
                for (std::size_t c = 0; c < m_in.width; ++c) out(r / m_scale, c / m_scale) += x(r, c);
            return out *= inv;
        }
        case DegradationKind::composite: {
            ImagePlane cur = x;
            for (const auto& child : m_children) cur = child.apply(cur);
            return cur;
        }
    }
    throw std::logic_error("apply: unknown operator kind");
}

ImagePlane LinearDegradation::apply_pinv(const ImagePlane& y) const {
    require_same_dims(y.dims(), m_out, "apply_pinv");
    switch (m_kind) {
        case DegradationKind::identity:
            return y;
        case DegradationKind::blur:
            return blur_spectral(y, false, true);
        case DegradationKind::downsample: {
            ImagePlane out(m_in);
            for (std::size_t r = 0; r < m_in.height; ++r)
                for (std::size_t c = 0; c < m_in.width; ++c) out(r, c) = y(r / m_scale, c / m_scale);
            return out;
        }
        case DegradationKind::composite: {
            ImagePlane cur = y;
            for (auto it = m_children.rbegin(); it != m_children.rend(); ++it) cur = it->apply_pinv(cur);
            return cur;
        }
    }
    throw std::logic_error("apply_pinv: unknown operator kind");
}

ImagePlane LinearDegradation::apply_transpose(const ImagePlane& y) const {
    require_same_dims(y.dims(), m_out, "apply_transpose");
    switch (m_kind) {
        case DegradationKind::identity:
            return y;
        case DegradationKind::blur:
            return blur_direct(y, true);
        case DegradationKind::downsample: {
            ImagePlane out(m_in);
            const double inv = 1.0 / static_cast<double>(m_scale * m_scale);
            for (std::size_t r = 0; r < m_in.height; ++r)
                for (std::size_t c = 0; c < m_in.width; ++c) out(r, c) = y(r / m_scale, c / m_scale) * inv;
            return out;
        }
        case DegradationKind::composite: {
            ImagePlane cur = y;
            for (auto it = m_children.rbegin(); it != m_children.rend(); ++it) cur = it->apply_transpose(cur);
            return cur;
        }
    }
    throw std::logic_error("apply_transpose: unknown operator kind");
}

ImagePlane LinearDegradation::apply_pinv_transpose(const ImagePlane& x) const {
    require_same_dims(x.dims(), m_in, "apply_pinv_transpose");
    switch (m_kind) {
        case DegradationKind::identity:
            return x;
        case DegradationKind::blur:
            return blur_spectral(x, true, true);
        case DegradationKind::downsample: {
            ImagePlane out(m_out);
            for (std::size_t r = 0; r < m_in.height; ++r)
                for (std::size_t c = 0; c < m_in.width; ++c) out(r / m_scale, c / m_scale) += x(r, c);
            return out;
        }
        case DegradationKind::composite: {
            ImagePlane cur = x;
            for (const auto& child : m_children) cur = child.apply_pinv_transpose(cur);
            return cur;
        }
    }
    throw std::logic_error("apply_pinv_transpose: unknown operator kind");
}

double LinearDegradation::row_norm_sq() const {
    const ImagePlane row = apply_transpose(unit_image(m_out, 0));
    double s = 0.0;
    for (double v : row.values()) s += v * v;
    return s;
}

std::string LinearDegradation::describe() const {
    std::ostringstream os;
    switch (m_kind) {
        case DegradationKind::identity:
            os << "id";
            break;
        case DegradationKind::blur:
            os << "blur[" << m_kernel.size << "x" << m_kernel.size << ",gamma=" << m_gamma << "]";
            break;
        case DegradationKind::downsample:
            os << "down[s=" << m_scale << "]";
            break;
        case DegradationKind::composite:
            for (std::size_t i = 0; i < m_children.size(); ++i) os << (i ? "+" : "") << m_children[i].describe();
            break;
    }
    os << "(" << to_string(m_in) << "->" << to_string(m_out) << ")";
    return os.str();
}

ImagePlane blur_via_fft(const LinearDegradation& op, const ImagePlane& x) {
    if (op.kind() != DegradationKind::blur) throw std::invalid_argument("blur_via_fft: operator is not a blur");
    require_same_dims(x.dims(), op.in_dims(), "blur_via_fft");
    return op.blur_spectral(x, false, false);
}

}  // namespace degfuse
