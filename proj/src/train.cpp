// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/train.hpp"

#include <cmath>
#include <stdexcept>

#include "degfuse/errors.hpp"
#include "degfuse/opspec.hpp"

namespace degfuse {

namespace {

struct StepTape {
    TinyNetCache cache;
    JointState x0_hat;
    JointState corrected;
    double scale = 1.0;
    double eps_factor = 1.0;
};

StepTape forward_tape(const TinyNetParams& p, const TrainingSample& s, const DiffusionSchedule& sched,
                      const FusionConfig& cfg) {
    StepTape tape;
    tape.cache = tiny_forward_cached(p, s.x_t, s.t, sched.steps());
    const double ab = sched.alpha_bar(s.t);
    tape.eps_factor = std::sqrt(1.0 - ab) / (cfg.ddim_normalize ? std::sqrt(ab) : 1.0);
    const DdimStep step(s.x_t, tape.cache.output.eps, s.t, sched, cfg.ddim_normalize);
    tape.x0_hat = step.x0_hat();
    const CorrectionScale scale = CorrectionScale::for_step(ab, cfg.sigma_y);
    tape.scale = scale.value;
    tape.corrected = correct(tape.x0_hat, JointOperator(s.a1, s.a2, tape.cache.output.w1), s.obs, scale);
    return tape;
}

/// Adjoint of the scaled correction. Returns d/d x0_hat and writes d/d w1.
JointState correction_adjoint(const TrainingSample& s, const StepTape& tape, const JointState& g, ImagePlane& g_w1) {
    const JointState& x = tape.x0_hat;
    const ImagePlane& w = tape.cache.output.w1;
    const double sc = tape.scale;
    const ImagePlane a_tilde = x.x1 - s.a1.apply_pinv(s.a1.apply(x.x1) - s.obs.y1);
    const ImagePlane b_tilde = x.x2 - s.a2.apply_pinv(s.a2.apply(x.x2) - s.obs.y2);

    const Dims d = x.dims();
    ImagePlane wg(d), vg(d);
    g_w1 = ImagePlane(d);
    for (std::size_t i = 0; i < d.count(); ++i) {
        wg[i] = w[i] * g.xf[i];
        vg[i] = (1.0 - w[i]) * g.xf[i];
        g_w1[i] = sc * (a_tilde[i] - b_tilde[i]) * g.xf[i];
    }
    JointState out;
    out.x1 = g.x1 + sc * wg - s.a1.apply_transpose(s.a1.apply_pinv_transpose(sc * (g.x1 + wg)));
    out.x2 = g.x2 + sc * vg - s.a2.apply_transpose(s.a2.apply_pinv_transpose(sc * (g.x2 + vg)));
    out.xf = (1.0 - sc) * g.xf;
    return out;
}

}  // namespace

void AdamState::update(TinyNetParams& params, const TinyNetParams& grad) {
    auto& p = params.flat();
    const auto& g = grad.flat();
    if (p.size() != m.size() || g.size() != m.size()) throw DimensionError("AdamState: parameter count mismatch");
    ++step;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        if (lr == 0.0) continue;
        p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon);
    }
}

TrainingSample make_training_sample(const FusionExample& ex, const LinearDegradation& a1,
                                    const LinearDegradation& a2, int t, const DiffusionSchedule& sched,
                                    SeededRng& rng) {
    if (t < 1 || t > sched.steps()) throw std::out_of_range("make_training_sample: step out of range");
    TrainingSample s{a1, a2, ex.clean1, ex.clean2, JointObservation::from_sources(ex.y1, ex.y2, a1.in_dims()), {}, t};
    s.x_t = forward_noise(initial_state(ex.y1, ex.y2, a1, a2), t, sched, rng);
    return s;
}

JointState unrolled_step(const TinyNetParams& p, const TrainingSample& s, const DiffusionSchedule& sched,
                         const FusionConfig& cfg) {
    return forward_tape(p, s, sched, cfg).corrected;
}

double sample_loss(const TinyNetParams& p, const TrainingSample& s, const DiffusionSchedule& sched,
                   const FusionConfig& cfg, const LossHyper& h) {
    return loss_total(unrolled_step(p, s, sched, cfg), s.label1, s.label2, h).total;
}

double batch_loss(const TinyNetParams& p, std::span<const TrainingSample> batch, const DiffusionSchedule& sched,
                  const FusionConfig& cfg, const LossHyper& h) {
    if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
    double acc = 0.0;
    for (const auto& s : batch) acc += sample_loss(p, s, sched, cfg, h);
    return acc / static_cast<double>(batch.size());
}

BatchGradient tiny_backward(const TinyNetParams& p, std::span<const TrainingSample> batch,
                            const DiffusionSchedule& sched, const FusionConfig& cfg, const LossHyper& h) {
    if (batch.empty()) throw std::invalid_argument("tiny_backward: empty batch");
    BatchGradient out;
    for (const auto& s : batch) {
        const StepTape tape = forward_tape(p, s, sched, cfg);
        out.loss += loss_total(tape.corrected, s.label1, s.label2, h).total;
        const JointState g_corr = loss_gradient(tape.corrected, s.label1, s.label2, h);
        ImagePlane g_w1;
        JointState g_eps = correction_adjoint(s, tape, g_corr, g_w1);
        g_eps *= -tape.eps_factor;
        TinyNetParams g;
        tiny_backward_network(p, tape.cache, g_eps, g_w1, g);
        for (std::size_t i = 0; i < g.size(); ++i) out.grad.flat()[i] += g.flat()[i];
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    out.loss *= inv;
    for (double& v : out.grad.flat()) v *= inv;
    return out;
}

void TrainConfig::validate() const {
    if (steps < 0) throw std::invalid_argument("train: steps must be non-negative");
    if (batch == 0 || dataset_size == 0) throw std::invalid_argument("train: batch and dataset size must be positive");
    if (!(lr >= 0.0)) throw std::invalid_argument("train: learning rate must be non-negative");
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("train: noise sigma must be non-negative");
    fusion.validate();
    loss.validate();
}

TrainResult train(TinyNetParams init, std::span<const FusionExample> data, const LinearDegradation& a1,
                  const LinearDegradation& a2, const TrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw std::invalid_argument("train: empty dataset");
    const DiffusionSchedule sched = make_schedule(cfg.fusion);
    SeededRng rng(cfg.seed);
    AdamState adam(init.size(), cfg.lr);
    TrainResult result{std::move(init), {}};
    result.losses.reserve(static_cast<std::size_t>(cfg.steps));

    std::vector<TrainingSample> batch;
    for (int step = 0; step < cfg.steps; ++step) {
        batch.clear();
        for (std::size_t b = 0; b < cfg.batch; ++b) {
            const FusionExample& ex = data[rng.below(data.size())];
            const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(sched.steps())));
            batch.push_back(make_training_sample(ex, a1, a2, t, sched, rng));
        }
        const BatchGradient bg = tiny_backward(result.params, batch, sched, cfg.fusion, cfg.loss);
        if (!std::isfinite(bg.loss)) throw NumericalError("train: non-finite loss at step " + std::to_string(step));
        result.losses.push_back(bg.loss);
        adam.update(result.params, bg.grad);
    }
    return result;
}

TrainResult train(const TrainConfig& cfg) {
    cfg.validate();
    const LinearDegradation a1 = build_operator(cfg.a1_spec, cfg.dims);
    const LinearDegradation a2 = build_operator(cfg.a2_spec, cfg.dims);
    const auto data = make_dataset(cfg.dataset_size, a1, a2, cfg.noise_sigma, cfg.seed ^ 0x5eed'da7aULL, cfg.dims);
    SeededRng init_rng(cfg.seed + 1);
    return train(TinyNetParams::random(init_rng, cfg.head_scale), data, a1, a2, cfg);
}

double window_mean(std::span<const double> curve, std::size_t begin, std::size_t window) {
    if (begin >= curve.size()) throw std::out_of_range("window_mean: start beyond curve");
    const std::size_t end = std::min(curve.size(), begin + window);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += curve[i];
    return acc / static_cast<double>(end - begin);
}

}  // namespace degfuse
