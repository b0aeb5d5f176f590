// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "degfuse/errors.hpp"
#include "degfuse/image.hpp"

namespace degfuse {

class PgmError : public Error {
public:
    enum class Code { missing_file, malformed_header, unsupported_magic, truncated_payload, unwritable_path, bad_maxval };

    PgmError(Code code, const std::string& what) : Error(what), m_code(code) {}
    Code code() const noexcept { return m_code; }

private:
    Code m_code;
};

/// Reads a P2 (ASCII) or P5 (binary) graymap; intensities divided by maxval.
ImagePlane load_pgm(const std::filesystem::path& path);

/// Writes binary P5. Values are clamped to [0,1] and quantized as floor(v*maxval + 0.5).
/// `maxval` must be 255 or 65535; 16-bit samples are big-endian per the netpbm format.
void save_pgm(const ImagePlane& img, const std::filesystem::path& path, int maxval = 255);

}  // namespace degfuse
