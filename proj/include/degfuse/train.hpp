// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "degfuse/loss.hpp"
#include "degfuse/sampler.hpp"
#include "degfuse/synthetic.hpp"
#include "degfuse/tiny_net.hpp"

namespace degfuse {

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t step = 0;
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t n, double learning_rate = 1e-4) : m(n, 0.0), v(n, 0.0), lr(learning_rate) {}

    /// One bias-corrected Adam update. lr = 0 leaves params untouched.
    void update(TinyNetParams& params, const TinyNetParams& grad);
};

/// One unrolled training step: x_t is the pinv-restored initialization noised to step t.
struct TrainingSample {
    LinearDegradation a1;
    LinearDegradation a2;
    ImagePlane label1;
    ImagePlane label2;
    JointObservation obs;
    JointState x_t;
    int t = 1;
};

TrainingSample make_training_sample(const FusionExample& ex, const LinearDegradation& a1,
                                    const LinearDegradation& a2, int t, const DiffusionSchedule& sched,
                                    SeededRng& rng);

/// Forward through the net, one DDIM x0 estimate and the scaled correction.
JointState unrolled_step(const TinyNetParams& p, const TrainingSample& s, const DiffusionSchedule& sched,
                         const FusionConfig& cfg);

double sample_loss(const TinyNetParams& p, const TrainingSample& s, const DiffusionSchedule& sched,
                   const FusionConfig& cfg, const LossHyper& h);

double batch_loss(const TinyNetParams& p, std::span<const TrainingSample> batch, const DiffusionSchedule& sched,
                  const FusionConfig& cfg, const LossHyper& h);

struct BatchGradient {
    double loss = 0.0;
    TinyNetParams grad;
};

/// Exact gradient of the mean batch loss. Per-sample gradients are summed in batch order.
BatchGradient tiny_backward(const TinyNetParams& p, std::span<const TrainingSample> batch,
                            const DiffusionSchedule& sched, const FusionConfig& cfg, const LossHyper& h);

struct TrainConfig {
    int steps = 200;
    std::size_t batch = 8;
    std::size_t dataset_size = 64;
    double lr = 1e-4;
    std::uint64_t seed = 42;
    /// Scale of the random init of the two output heads relative to He init.
    double head_scale = 0.1;
    std::string a1_spec = "id";
    std::string a2_spec = "blur:sigma=1.0+down:s=2";
    double noise_sigma = 0.05;
    Dims dims{32, 32};
    FusionConfig fusion;
    LossHyper loss;

    void validate() const;
};

struct TrainResult {
    TinyNetParams params;
    /// Mean batch loss before each update.
    std::vector<double> losses;
};

TrainResult train(TinyNetParams init, std::span<const FusionExample> data, const LinearDegradation& a1,
                  const LinearDegradation& a2, const TrainConfig& cfg);

/// Builds the operators, the synthetic dataset and the initial params from `cfg`.
TrainResult train(const TrainConfig& cfg);

/// Mean of `window` entries starting at `begin` (clipped to the curve).
double window_mean(std::span<const double> curve, std::size_t begin, std::size_t window);

}  // namespace degfuse
