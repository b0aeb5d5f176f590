// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace degfuse {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (image vs operator, block vs block).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Iterative method failed to converge, or a NaN/Inf escaped a computation.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed operator spec string; `position` is the 0-based column of the fault.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at column " + std::to_string(position) + ")"), m_position(position) {}

    std::size_t position() const noexcept { return m_position; }

private:
    std::size_t m_position;
};

}  // namespace degfuse
