// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "degfuse/operators.hpp"
#include "degfuse/rng.hpp"

namespace degfuse {

/// A pair of clean sources over one shared scene. `thermal` carries smooth bright
/// masses on a dim background; `visible` carries edges, flat regions and texture,
/// with the same masses showing up as dark sharp-edged discs.
struct SourcePair {
    ImagePlane thermal;
    ImagePlane visible;
};

SourcePair make_source_pair(SeededRng& rng, Dims dims = {32, 32});

struct FusionExample {
    ImagePlane clean1;
    ImagePlane clean2;
    ImagePlane y1;
    ImagePlane y2;
};

/// y_i = A_i clean_i + n_i with n_i ~ N(0, sigma^2), unclamped.
FusionExample degrade_pair(const SourcePair& pair, const LinearDegradation& a1, const LinearDegradation& a2,
                           double sigma, SeededRng& rng);

std::vector<FusionExample> make_dataset(std::size_t count, const LinearDegradation& a1, const LinearDegradation& a2,
                                        double sigma, std::uint64_t seed, Dims dims = {32, 32});

}  // namespace degfuse
