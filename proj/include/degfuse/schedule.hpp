// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace degfuse {

struct FusionConfig {
    int steps = 3;  // T
    double alpha_bar_first = 0.9;
    double alpha_bar_last = 0.3;
    double sigma_y = 0.0;
    /// Divide x0_hat by sqrt(abar_t) as in textbook DDIM; off by default.
    bool ddim_normalize = false;
    std::uint64_t seed = 42;
    bool keep_trace = false;

    void validate() const;
};

/// alpha_bar[0] = 1 and alpha_bar[1..T] interpolated linearly from
/// alpha_bar_first to alpha_bar_last.
class DiffusionSchedule {
public:
    explicit DiffusionSchedule(std::vector<double> alpha_bar);

    int steps() const noexcept { return static_cast<int>(m_alpha_bar.size()) - 1; }
    double alpha_bar(int t) const;
    /// 1 - abar_t / abar_{t-1}.
    double beta(int t) const;
    const std::vector<double>& alpha_bars() const noexcept { return m_alpha_bar; }

private:
    std::vector<double> m_alpha_bar;
};

DiffusionSchedule make_schedule(const FusionConfig& cfg);

}  // namespace degfuse
