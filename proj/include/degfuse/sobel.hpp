// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "degfuse/image.hpp"

namespace degfuse {

struct Gradient {
    ImagePlane gx;
    ImagePlane gy;
    ImagePlane magnitude;
};

/// 3x3 Sobel with weights divided by 4 and replicate-padded borders.
/// gx responds to left-to-right increase, gy to top-to-bottom increase.
Gradient sobel_gradient(const ImagePlane& img);

/// Adjoint of (gx, gy) -> image for the same stencil and padding, used to
/// backpropagate through the Sobel magnitude.
ImagePlane sobel_adjoint(const ImagePlane& dgx, const ImagePlane& dgy);

}  // namespace degfuse
