// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "degfuse/image.hpp"

namespace degfuse {

/// xoshiro256++ seeded through splitmix64; Gaussian draws via Box-Muller.
/// Single owner: not safe to share across threads.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();

private:
    std::array<std::uint64_t, 4> m_state{};
    double m_spare = 0.0;
    bool m_has_spare = false;
};

/// img + sigma * z with z i.i.d. standard normal, drawn in row-major order. No clamping.
ImagePlane gaussian_noise(const ImagePlane& img, double sigma, SeededRng& rng);

/// Plane of i.i.d. standard normal draws.
ImagePlane standard_normal(Dims dims, SeededRng& rng);

}  // namespace degfuse
