// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace degfuse {

namespace {

struct Mass {
    double row, col, radius, heat;
};

struct Block {
    std::size_t r0, c0, r1, c1;
    double level;
};

}  // namespace

SourcePair make_source_pair(SeededRng& rng, Dims dims) {
    const double h = static_cast<double>(dims.height), w = static_cast<double>(dims.width);
    const double scale = std::min(h, w) / 32.0;

    std::vector<Mass> masses(2 + rng.below(2));
    for (auto& m : masses) {
        m.radius = scale * rng.uniform(2.5, 5.5);
        m.row = rng.uniform(m.radius, h - m.radius);
        m.col = rng.uniform(m.radius, w - m.radius);
        m.heat = rng.uniform(0.55, 0.85);
    }
    std::vector<Block> blocks(2 + rng.below(2));
    for (auto& b : blocks) {
        b.r0 = rng.below(dims.height / 2);
        b.c0 = rng.below(dims.width / 2);
        b.r1 = std::min(dims.height, b.r0 + dims.height / 4 + rng.below(dims.height / 2));
        b.c1 = std::min(dims.width, b.c0 + dims.width / 4 + rng.below(dims.width / 2));
        b.level = rng.uniform(0.2, 0.9);
    }
    const double fy = rng.uniform(0.4, 1.2), fx = rng.uniform(0.4, 1.2);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double ambient = rng.uniform(0.08, 0.2);

    SourcePair out{ImagePlane(dims), ImagePlane(dims)};
    for (std::size_t r = 0; r < dims.height; ++r) {
        for (std::size_t c = 0; c < dims.width; ++c) {
            const double y = static_cast<double>(r) + 0.5, x = static_cast<double>(c) + 0.5;
            double vis = 0.45 + 0.08 * std::sin(fy * y + fx * x + phase);
            for (const auto& b : blocks) {
                if (r >= b.r0 && r < b.r1 && c >= b.c0 && c < b.c1) vis = b.level + 0.05 * std::sin(fx * x - fy * y);
            }
            double heat = ambient + 0.05 * (y / h);
            for (const auto& m : masses) {
                const double d2 = (y - m.row) * (y - m.row) + (x - m.col) * (x - m.col);
                heat += m.heat * std::exp(-d2 / (m.radius * m.radius));
                if (d2 <= m.radius * m.radius) vis = 0.6 * vis;
            }
            out.thermal(r, c) = std::clamp(heat, 0.0, 1.0);
            out.visible(r, c) = std::clamp(vis, 0.0, 1.0);
        }
    }
    return out;
}

FusionExample degrade_pair(const SourcePair& pair, const LinearDegradation& a1, const LinearDegradation& a2,
                           double sigma, SeededRng& rng) {
    FusionExample ex;
    ex.clean1 = pair.thermal;
    ex.clean2 = pair.visible;
    ex.y1 = gaussian_noise(a1.apply(pair.thermal), sigma, rng);
    ex.y2 = gaussian_noise(a2.apply(pair.visible), sigma, rng);
    return ex;
}

std::vector<FusionExample> make_dataset(std::size_t count, const LinearDegradation& a1, const LinearDegradation& a2,
                                        double sigma, std::uint64_t seed, Dims dims) {
    SeededRng rng(seed);
    std::vector<FusionExample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(degrade_pair(make_source_pair(rng, dims), a1, a2, sigma, rng));
    return out;
}

}  // namespace degfuse
