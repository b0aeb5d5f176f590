// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/tiny_net.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "degfuse/errors.hpp"

namespace degfuse {

namespace {

constexpr char kMagic[4] = {'T', 'N', 'P', '1'};

std::size_t total_param_count() {
    std::size_t n = 0;
    for (const auto& l : kTinyNetLayers) n += l.weight_count() + l.out_channels;
    return n;
}

Dims padded(Dims d) { return {d.height + 2, d.width + 2}; }

FeatureMap pad_replicate(const FeatureMap& in) {
    const Dims d = in.dims, pd = padded(d);
    FeatureMap out(in.channels, pd);
    for (std::size_t ch = 0; ch < in.channels; ++ch) {
        const auto src = in.channel(ch);
        auto dst = out.channel(ch);
        for (std::size_t pr = 0; pr < pd.height; ++pr) {
            const std::size_t r = std::clamp<std::size_t>(pr, 1, d.height) - 1;
            for (std::size_t pc = 0; pc < pd.width; ++pc) {
                const std::size_t c = std::clamp<std::size_t>(pc, 1, d.width) - 1;
                dst[pr * pd.width + pc] = src[r * d.width + c];
            }
        }
    }
    return out;
}

/// Folds a gradient on the padded grid back onto the clamped source pixels.
FeatureMap unpad_accumulate(const FeatureMap& grad_padded, Dims d) {
    const Dims pd = padded(d);
    FeatureMap out(grad_padded.channels, d);
    for (std::size_t ch = 0; ch < grad_padded.channels; ++ch) {
        const auto src = grad_padded.channel(ch);
        auto dst = out.channel(ch);
        for (std::size_t pr = 0; pr < pd.height; ++pr) {
            const std::size_t r = std::clamp<std::size_t>(pr, 1, d.height) - 1;
            for (std::size_t pc = 0; pc < pd.width; ++pc) {
                const std::size_t c = std::clamp<std::size_t>(pc, 1, d.width) - 1;
                dst[r * d.width + c] += src[pr * pd.width + pc];
            }
        }
    }
    return out;
}

FeatureMap conv3x3(const FeatureMap& in_padded, Dims d, std::span<const double> w, std::span<const double> b,
                   LayerShape shape) {
    const std::size_t pw = d.width + 2;
    FeatureMap out(shape.out_channels, d);
    for (std::size_t o = 0; o < shape.out_channels; ++o) {
        auto dst = out.channel(o);
        std::fill(dst.begin(), dst.end(), b[o]);
        for (std::size_t i = 0; i < shape.in_channels; ++i) {
            const auto src = in_padded.channel(i);
            for (std::size_t ky = 0; ky < 3; ++ky)
                for (std::size_t kx = 0; kx < 3; ++kx) {
                    const double wk = w[((o * shape.in_channels + i) * 3 + ky) * 3 + kx];
                    for (std::size_t r = 0; r < d.height; ++r) {
                        const double* s = &src[(r + ky) * pw + kx];
                        double* t = &dst[r * d.width];
                        for (std::size_t c = 0; c < d.width; ++c) t[c] += wk * s[c];
                    }
                }
        }
    }
    return out;
}

/// Returns dL/d(padded input); accumulates weight and bias gradients.
FeatureMap conv3x3_backward(const FeatureMap& in_padded, Dims d, const FeatureMap& grad_out,
                            std::span<const double> w, std::span<double> gw, std::span<double> gb, LayerShape shape,
                            bool need_input_grad) {
    const std::size_t pw = d.width + 2;
    FeatureMap grad_in(need_input_grad ? shape.in_channels : 0, padded(d));
    for (std::size_t o = 0; o < shape.out_channels; ++o) {
        const auto g = grad_out.channel(o);
        double bsum = 0.0;
        for (double v : g) bsum += v;
        gb[o] += bsum;
        for (std::size_t i = 0; i < shape.in_channels; ++i) {
            const auto src = in_padded.channel(i);
            for (std::size_t ky = 0; ky < 3; ++ky)
                for (std::size_t kx = 0; kx < 3; ++kx) {
                    const std::size_t widx = ((o * shape.in_channels + i) * 3 + ky) * 3 + kx;
                    double acc = 0.0;
                    for (std::size_t r = 0; r < d.height; ++r) {
                        const double* s = &src[(r + ky) * pw + kx];
                        const double* gr = &g[r * d.width];
                        for (std::size_t c = 0; c < d.width; ++c) acc += gr[c] * s[c];
                    }
                    gw[widx] += acc;
                    if (!need_input_grad) continue;
                    const double wk = w[widx];
                    auto dst = grad_in.channel(i);
                    for (std::size_t r = 0; r < d.height; ++r) {
                        double* t = &dst[(r + ky) * pw + kx];
                        const double* gr = &g[r * d.width];
                        for (std::size_t c = 0; c < d.width; ++c) t[c] += wk * gr[c];
                    }
                }
        }
    }
    return grad_in;
}

FeatureMap relu(const FeatureMap& x) {
    FeatureMap out = x;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return out;
}

void relu_backward(FeatureMap& grad, const FeatureMap& pre) {
    for (std::size_t i = 0; i < grad.data.size(); ++i)
        if (!(pre.data[i] > 0.0)) grad.data[i] = 0.0;
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

ImagePlane plane_of(const FeatureMap& fm, std::size_t ch) {
    const auto src = fm.channel(ch);
    return ImagePlane(fm.dims.height, fm.dims.width, std::vector<double>(src.begin(), src.end()));
}

void write_u32(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(const std::vector<unsigned char>& bytes, std::size_t& pos) {
    if (pos + 4 > bytes.size()) throw Error("load_params: truncated header");
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | bytes[pos + static_cast<std::size_t>(k)];
    pos += 4;
    return v;
}

}  // namespace

TinyNetParams::TinyNetParams() : m_values(total_param_count(), 0.0) {}

std::size_t TinyNetParams::weight_offset(std::size_t layer) const {
    std::size_t off = 0;
    for (std::size_t l = 0; l < layer; ++l) off += kTinyNetLayers[l].weight_count() + kTinyNetLayers[l].out_channels;
    return off;
}

std::span<double> TinyNetParams::weights(std::size_t layer) {
    return {m_values.data() + weight_offset(layer), kTinyNetLayers.at(layer).weight_count()};
}
std::span<const double> TinyNetParams::weights(std::size_t layer) const {
    return {m_values.data() + weight_offset(layer), kTinyNetLayers.at(layer).weight_count()};
}
std::span<double> TinyNetParams::biases(std::size_t layer) {
    return {m_values.data() + weight_offset(layer) + kTinyNetLayers.at(layer).weight_count(),
            kTinyNetLayers[layer].out_channels};
}
std::span<const double> TinyNetParams::biases(std::size_t layer) const {
    return {m_values.data() + weight_offset(layer) + kTinyNetLayers.at(layer).weight_count(),
            kTinyNetLayers[layer].out_channels};
}

TinyNetParams TinyNetParams::random(SeededRng& rng, double head_scale) {
    TinyNetParams p;
    for (std::size_t l = 0; l < kTinyNetLayers.size(); ++l) {
        const double fan_in = static_cast<double>(kTinyNetLayers[l].in_channels * 9);
        double std_dev = std::sqrt(2.0 / fan_in);
        if (l >= 2) std_dev *= head_scale;
        for (double& w : p.weights(l)) w = std_dev * rng.normal();
    }
    return p;
}

void save_params(const TinyNetParams& p, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("save_params: cannot write '" + path.string() + "'");
    out.write(kMagic, 4);
    write_u32(out, static_cast<std::uint32_t>(kTinyNetLayers.size()));
    for (const auto& l : kTinyNetLayers) {
        write_u32(out, static_cast<std::uint32_t>(l.out_channels));
        write_u32(out, static_cast<std::uint32_t>(l.in_channels));
        write_u32(out, 3);
        write_u32(out, 3);
    }
    for (double v : p.flat()) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
        out.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!out) throw Error("save_params: write failed for '" + path.string() + "'");
}

TinyNetParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("load_params: cannot open '" + path.string() + "'");
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw Error("load_params: bad magic, expected TNP1");
    std::size_t pos = 4;
    const std::uint32_t layers = read_u32(bytes, pos);
    if (layers != kTinyNetLayers.size()) throw Error("load_params: unexpected layer count " + std::to_string(layers));
    for (const auto& l : kTinyNetLayers) {
        const std::uint32_t o = read_u32(bytes, pos), i = read_u32(bytes, pos);
        const std::uint32_t kh = read_u32(bytes, pos), kw = read_u32(bytes, pos);
        if (o != l.out_channels || i != l.in_channels || kh != 3 || kw != 3) {
            throw Error("load_params: layer shape does not match the 4-layer tiny network");
        }
    }
    TinyNetParams p;
    if (bytes.size() != pos + 8 * p.size()) throw Error("load_params: payload size mismatch");
    for (double& v : p.flat()) {
        std::uint64_t bits = 0;
        for (int k = 7; k >= 0; --k) bits = (bits << 8) | bytes[pos + static_cast<std::size_t>(k)];
        v = std::bit_cast<double>(bits);
        pos += 8;
        if (!std::isfinite(v)) throw Error("load_params: non-finite parameter");
    }
    return p;
}

TinyNetCache tiny_forward_cached(const TinyNetParams& p, const JointState& x_t, int t, int total_steps) {
    x_t.validate();
    const Dims d = x_t.dims();
    if (d.height < 3 || d.width < 3) throw DimensionError("tiny_forward: planes must be at least 3x3");
    if (total_steps < 1) throw std::invalid_argument("tiny_forward: total steps must be positive");

    FeatureMap input(kTinyNetInputChannels, d);
    std::copy(x_t.x1.values().begin(), x_t.x1.values().end(), input.channel(0).begin());
    std::copy(x_t.x2.values().begin(), x_t.x2.values().end(), input.channel(1).begin());
    std::copy(x_t.xf.values().begin(), x_t.xf.values().end(), input.channel(2).begin());
    const auto tc = input.channel(3);
    std::fill(tc.begin(), tc.end(), static_cast<double>(t) / static_cast<double>(total_steps));

    TinyNetCache cache;
    cache.dims = d;
    cache.input_padded = pad_replicate(input);
    cache.pre1 = conv3x3(cache.input_padded, d, p.weights(0), p.biases(0), kTinyNetLayers[0]);
    cache.act1_padded = pad_replicate(relu(cache.pre1));
    cache.pre2 = conv3x3(cache.act1_padded, d, p.weights(1), p.biases(1), kTinyNetLayers[1]);
    cache.act2_padded = pad_replicate(relu(cache.pre2));
    const FeatureMap eps = conv3x3(cache.act2_padded, d, p.weights(2), p.biases(2), kTinyNetLayers[2]);
    const FeatureMap logit = conv3x3(cache.act2_padded, d, p.weights(3), p.biases(3), kTinyNetLayers[3]);

    cache.output.eps = {plane_of(eps, 0), plane_of(eps, 1), plane_of(eps, 2)};
    cache.output.w1 = plane_of(logit, 0);
    for (double& v : cache.output.w1.values()) v = sigmoid(v);
    return cache;
}

DenoiserOutput tiny_forward(const TinyNetParams& p, const JointState& x_t, int t, int total_steps) {
    return tiny_forward_cached(p, x_t, t, total_steps).output;
}

void tiny_backward_network(const TinyNetParams& p, const TinyNetCache& cache, const JointState& grad_eps,
                           const ImagePlane& grad_w1, TinyNetParams& grad) {
    const Dims d = cache.dims;
    FeatureMap g_eps(3, d);
    std::copy(grad_eps.x1.values().begin(), grad_eps.x1.values().end(), g_eps.channel(0).begin());
    std::copy(grad_eps.x2.values().begin(), grad_eps.x2.values().end(), g_eps.channel(1).begin());
    std::copy(grad_eps.xf.values().begin(), grad_eps.xf.values().end(), g_eps.channel(2).begin());
    FeatureMap g_logit(1, d);
    const ImagePlane& w1 = cache.output.w1;
    for (std::size_t i = 0; i < d.count(); ++i) g_logit.data[i] = grad_w1[i] * w1[i] * (1.0 - w1[i]);

    FeatureMap g_act2 = conv3x3_backward(cache.act2_padded, d, g_eps, p.weights(2), grad.weights(2), grad.biases(2),
                                         kTinyNetLayers[2], true);
    const FeatureMap g_act2_w = conv3x3_backward(cache.act2_padded, d, g_logit, p.weights(3), grad.weights(3),
                                                 grad.biases(3), kTinyNetLayers[3], true);
    for (std::size_t i = 0; i < g_act2.data.size(); ++i) g_act2.data[i] += g_act2_w.data[i];

    FeatureMap g_pre2 = unpad_accumulate(g_act2, d);
    relu_backward(g_pre2, cache.pre2);
    const FeatureMap g_act1 = conv3x3_backward(cache.act1_padded, d, g_pre2, p.weights(1), grad.weights(1),
                                               grad.biases(1), kTinyNetLayers[1], true);
    FeatureMap g_pre1 = unpad_accumulate(g_act1, d);
    relu_backward(g_pre1, cache.pre1);
    conv3x3_backward(cache.input_padded, d, g_pre1, p.weights(0), grad.weights(0), grad.biases(0), kTinyNetLayers[0],
                     false);
}

DenoiserOutput TinyNetDenoiser::predict(const JointState& x_t, int t, const DiffusionSchedule& sched) const {
    return tiny_forward(m_params, x_t, t, sched.steps());
}

}  // namespace degfuse
