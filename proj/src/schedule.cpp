// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/schedule.hpp"

#include <stdexcept>
#include <string>

namespace degfuse {

void FusionConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("FusionConfig: T must be at least 1");
    if (!(0.0 < alpha_bar_last && alpha_bar_last < alpha_bar_first && alpha_bar_first < 1.0)) {
        throw std::invalid_argument("FusionConfig: need 0 < alpha_bar_last < alpha_bar_first < 1");
    }
    if (!(sigma_y >= 0.0)) throw std::invalid_argument("FusionConfig: sigma_y must be non-negative");
}

DiffusionSchedule::DiffusionSchedule(std::vector<double> alpha_bar) : m_alpha_bar(std::move(alpha_bar)) {
    if (m_alpha_bar.size() < 2 || m_alpha_bar.front() != 1.0) {
        throw std::invalid_argument("DiffusionSchedule: need alpha_bar[0] = 1 and at least one step");
    }
    for (std::size_t t = 1; t < m_alpha_bar.size(); ++t) {
        if (!(m_alpha_bar[t] > 0.0 && m_alpha_bar[t] < m_alpha_bar[t - 1])) {
            throw std::invalid_argument("DiffusionSchedule: alpha_bar must be positive and strictly decreasing");
        }
    }
}

double DiffusionSchedule::alpha_bar(int t) const {
    if (t < 0 || t > steps()) throw std::out_of_range("alpha_bar: step " + std::to_string(t) + " out of range");
    return m_alpha_bar[static_cast<std::size_t>(t)];
}

double DiffusionSchedule::beta(int t) const {
    if (t < 1 || t > steps()) throw std::out_of_range("beta: step " + std::to_string(t) + " out of range");
    return 1.0 - m_alpha_bar[static_cast<std::size_t>(t)] / m_alpha_bar[static_cast<std::size_t>(t) - 1];
}

DiffusionSchedule make_schedule(const FusionConfig& cfg) {
    cfg.validate();
    std::vector<double> ab(static_cast<std::size_t>(cfg.steps) + 1);
    ab[0] = 1.0;
    if (cfg.steps == 1) {
        ab[1] = cfg.alpha_bar_last;
    } else {
        for (int t = 1; t <= cfg.steps; ++t) {
            const double frac = static_cast<double>(t - 1) / static_cast<double>(cfg.steps - 1);
            ab[static_cast<std::size_t>(t)] = cfg.alpha_bar_first + (cfg.alpha_bar_last - cfg.alpha_bar_first) * frac;
        }
    }
    return DiffusionSchedule(std::move(ab));
}

}  // namespace degfuse
