// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "degfuse/denoiser.hpp"
#include "degfuse/rng.hpp"

namespace degfuse {

struct LayerShape {
    std::size_t out_channels;
    std::size_t in_channels;

    std::size_t weight_count() const { return out_channels * in_channels * 9; }
};

/// conv1 3x3 4->16, conv2 3x3 16->16, head_eps 3x3 16->3, head_w 3x3 16->1.
inline constexpr std::array<LayerShape, 4> kTinyNetLayers{{{16, 4}, {16, 16}, {3, 16}, {1, 16}}};
inline constexpr std::size_t kTinyNetInputChannels = 4;

/// All parameters in one flat buffer, laid out in declaration order:
/// conv1.w, conv1.b, conv2.w, conv2.b, head_eps.w, head_eps.b, head_w.w, head_w.b.
/// Weights are indexed [out][in][ky][kx]. The same type carries gradients.
class TinyNetParams {
public:
    TinyNetParams();

    /// He-normal hidden layers; heads scaled down by `head_scale`. Biases zero.
    static TinyNetParams random(SeededRng& rng, double head_scale = 1.0);

    std::span<double> weights(std::size_t layer);
    std::span<const double> weights(std::size_t layer) const;
    std::span<double> biases(std::size_t layer);
    std::span<const double> biases(std::size_t layer) const;

    std::vector<double>& flat() noexcept { return m_values; }
    const std::vector<double>& flat() const noexcept { return m_values; }
    std::size_t size() const noexcept { return m_values.size(); }

    bool operator==(const TinyNetParams&) const = default;

private:
    std::size_t weight_offset(std::size_t layer) const;

    std::vector<double> m_values;
};

/// Little-endian binary: "TNP1", u32 layer count, per layer u32 (out, in, kh, kw),
/// then raw float64 values in declaration order.
void save_params(const TinyNetParams& p, const std::filesystem::path& path);
TinyNetParams load_params(const std::filesystem::path& path);

/// Channel-major stack of planes.
struct FeatureMap {
    std::size_t channels = 0;
    Dims dims;
    std::vector<double> data;

    FeatureMap() = default;
    FeatureMap(std::size_t ch, Dims d) : channels(ch), dims(d), data(ch * d.count(), 0.0) {}
    std::span<double> channel(std::size_t c) { return {data.data() + c * dims.count(), dims.count()}; }
    std::span<const double> channel(std::size_t c) const { return {data.data() + c * dims.count(), dims.count()}; }
};

/// Intermediate values kept for the backward pass.
struct TinyNetCache {
    Dims dims;
    FeatureMap input_padded;
    FeatureMap pre1;
    FeatureMap act1_padded;
    FeatureMap pre2;
    FeatureMap act2_padded;
    DenoiserOutput output;
};

/// Input channels: x1, x2, xf, constant t/T. Replicate padding throughout;
/// the w1 head is sigmoid-activated.
TinyNetCache tiny_forward_cached(const TinyNetParams& p, const JointState& x_t, int t, int total_steps);
DenoiserOutput tiny_forward(const TinyNetParams& p, const JointState& x_t, int t, int total_steps);

/// Accumulates dL/dparams into `grad` given dL/d eps and dL/d w1.
void tiny_backward_network(const TinyNetParams& p, const TinyNetCache& cache, const JointState& grad_eps,
                           const ImagePlane& grad_w1, TinyNetParams& grad);

class TinyNetDenoiser final : public Denoiser {
public:
    explicit TinyNetDenoiser(TinyNetParams params) : m_params(std::move(params)) {}

    DenoiserOutput predict(const JointState& x_t, int t, const DiffusionSchedule& sched) const override;
    const TinyNetParams& params() const noexcept { return m_params; }

private:
    TinyNetParams m_params;
};

}  // namespace degfuse
