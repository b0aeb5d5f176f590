// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/opspec.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "degfuse/errors.hpp"

namespace degfuse {

namespace {

double parse_real(std::string_view s, std::size_t pos) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError("expected a number, got '" + std::string(s) + "'", pos);
    }
    return v;
}

std::size_t parse_count(std::string_view s, std::size_t pos) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
        throw ParseError("expected a positive integer, got '" + std::string(s) + "'", pos);
    }
    return v;
}

OpSpec::Stage parse_stage(std::string_view text, std::size_t offset) {
    OpSpec::Stage stage;
    const std::size_t colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    if (name == "id") {
        stage.kind = DegradationKind::identity;
    } else if (name == "blur") {
        stage.kind = DegradationKind::blur;
    } else if (name == "down") {
        stage.kind = DegradationKind::downsample;
    } else {
        throw ParseError("unknown operator '" + std::string(name) + "'", offset);
    }
    if (colon == std::string_view::npos) return stage;
    if (stage.kind == DegradationKind::identity) throw ParseError("'id' takes no parameters", offset + colon);

    std::size_t pos = colon + 1;
    if (pos >= text.size()) throw ParseError("empty parameter list", offset + pos);
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view item = text.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
            throw ParseError("expected key=value, got '" + std::string(item) + "'", offset + pos);
        }
        const std::string_view key = item.substr(0, eq), value = item.substr(eq + 1);
        const std::size_t value_pos = offset + pos + eq + 1;
        if (stage.kind == DegradationKind::blur && key == "sigma") {
            stage.sigma = parse_real(value, value_pos);
            if (!(stage.sigma > 0.0)) throw ParseError("sigma must be positive", value_pos);
        } else if (stage.kind == DegradationKind::blur && key == "gamma") {
            stage.gamma = parse_real(value, value_pos);
            if (stage.gamma < 0.0) throw ParseError("gamma must be non-negative", value_pos);
        } else if (stage.kind == DegradationKind::blur && key == "size") {
            stage.kernel_size = parse_count(value, value_pos);
            if (stage.kernel_size % 2 == 0) throw ParseError("kernel size must be odd", value_pos);
        } else if (stage.kind == DegradationKind::downsample && key == "s") {
            stage.scale = parse_count(value, value_pos);
        } else {
            throw ParseError("unknown parameter '" + std::string(key) + "' for '" + std::string(name) + "'",
                             offset + pos);
        }
        pos = comma + 1;
    }
    return stage;
}

}  // namespace

OpSpec parse_opspec(std::string_view text) {
    OpSpec spec;
    if (text.empty()) throw ParseError("empty operator spec", 0);
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t plus = text.find('+', pos);
        if (plus == std::string_view::npos) plus = text.size();
        if (plus == pos) throw ParseError("empty stage", pos);
        spec.stages.push_back(parse_stage(text.substr(pos, plus - pos), pos));
        pos = plus + 1;
    }
    return spec;
}

std::string to_string(const OpSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const auto& s = spec.stages[i];
        if (i) os << '+';
        switch (s.kind) {
            case DegradationKind::identity:
                os << "id";
                break;
            case DegradationKind::blur:
                os << "blur:sigma=" << s.sigma << ",gamma=" << s.gamma;
                if (s.kernel_size) os << ",size=" << s.kernel_size;
                break;
            case DegradationKind::downsample:
                os << "down:s=" << s.scale;
                break;
            case DegradationKind::composite:
                break;
        }
    }
    return os.str();
}

LinearDegradation build_operator(const OpSpec& spec, Dims in_dims) {
    std::vector<LinearDegradation> ops;
    Dims cur = in_dims;
    for (const auto& s : spec.stages) {
        switch (s.kind) {
            case DegradationKind::identity:
                ops.push_back(LinearDegradation::identity(cur));
                break;
            case DegradationKind::blur:
                ops.push_back(LinearDegradation::blur(cur, gaussian_kernel(s.sigma, s.kernel_size), s.gamma));
                break;
            case DegradationKind::downsample:
                ops.push_back(LinearDegradation::downsample(cur, s.scale));
                break;
            case DegradationKind::composite:
                throw std::logic_error("build_operator: nested composite stage");
        }
        cur = ops.back().out_dims();
    }
    if (ops.size() == 1) return ops.front();
    return LinearDegradation::composite(std::move(ops));
}

Dims infer_input_dims(const OpSpec& spec, Dims out_dims) {
    Dims d = out_dims;
    for (const auto& s : spec.stages)
        if (s.kind == DegradationKind::downsample) d = {d.height * s.scale, d.width * s.scale};
    return d;
}

}  // namespace degfuse
