// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "degfuse/image.hpp"

namespace degfuse {

using Complex = std::complex<double>;

/// In-place DFT of any length: iterative radix-2 for powers of two, Bluestein
/// otherwise. Forward uses exp(-2 pi i jk/n); the inverse is scaled by 1/n.
void fft(std::vector<Complex>& data, bool inverse = false);

/// Row-major 2-D DFT as row transforms followed by column transforms.
void fft2d(std::vector<Complex>& data, Dims dims, bool inverse = false);

std::vector<Complex> fft2d(const ImagePlane& img);

/// Inverse 2-D DFT keeping the real part.
ImagePlane ifft2d_real(std::vector<Complex> spectrum, Dims dims);

}  // namespace degfuse
