/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <string>

#include "wdip/image.hpp"

namespace wdip::io {

/// Reads an 8/16-bit PNG as gray or RGB in [0,1] (values clamped, alpha
/// dropped, palette expanded).
ImageField load_png(const std::string& path);

/// Writes gray (1 channel) or RGB (3 channel) PNG; values are clamped to
/// [0,1] and quantized to the requested bit depth (8 or 16).
void save_png(const std::string& path, const ImageField& image, int bit_depth = 8);

// Lossless float grid ("WFG1"), for intermediate results.
ImageField load_fgrid(const std::string& path);
void save_fgrid(const std::string& path, const ImageField& image);

/// Plain-text kernel matrix: one row per line, space-separated decimals.
Kernel load_kernel_text(const std::string& path);
void save_kernel_text(const std::string& path, const Kernel& kernel);

/// Max-normalized grayscale visualization of a kernel.
void save_kernel_png(const std::string& path, const Kernel& kernel);

}  // namespace wdip::io
