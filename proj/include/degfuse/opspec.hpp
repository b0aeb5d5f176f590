// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "degfuse/operators.hpp"

namespace degfuse {

/// Parsed operator spec string, e.g. `id`, `blur:sigma=1.0,gamma=1e-3`,
/// `down:s=2`, or a `+`-joined chain applied left to right.
struct OpSpec {
    struct Stage {
        DegradationKind kind = DegradationKind::identity;
        double sigma = 1.0;
        double gamma = kDefaultWienerGamma;
        std::size_t kernel_size = 0;  // 0 = derived from sigma
        std::size_t scale = 2;
    };

    std::vector<Stage> stages;
};

/// Throws ParseError carrying the column of the offending character.
OpSpec parse_opspec(std::string_view text);

/// Canonical text form with every parameter spelled out.
std::string to_string(const OpSpec& spec);

LinearDegradation build_operator(const OpSpec& spec, Dims in_dims);
inline LinearDegradation build_operator(std::string_view text, Dims in_dims) {
    return build_operator(parse_opspec(text), in_dims);
}

/// Clean-domain dimensions implied by an observation of size `out_dims`.
Dims infer_input_dims(const OpSpec& spec, Dims out_dims);

}  // namespace degfuse
