/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "wdip/image.hpp"

namespace wdip::metrics {

struct MetricReport {
    std::string id;
    std::uint64_t seed = 0;
    double psnr = 0.0;
    double ssim = 0.0;
    std::optional<double> error_ratio;
    std::optional<double> dice;
};

/// 10*log10(1 / MSE) with peak 1; identical inputs report +infinity.
double psnr(const ImageField& estimate, const ImageField& truth);

/// Mean SSIM, 11x11 Gaussian window (sigma 1.5), standard constants,
/// valid-window mean. Single-channel inputs.
double ssim(const ImageField& estimate, const ImageField& truth);

/// Levin-style error ratio under this artifact's Wiener deconvolver at a
/// fixed constant c (both numerator and denominator); each reconstruction is
/// aligned to the truth by its best circular shift before the SSD.
double error_ratio(const ImageField& blurred, const ImageField& truth,
                   const Kernel& estimated_kernel, const Kernel& true_kernel,
                   double c);

/// Clamp values to the [lo_pct, hi_pct] percentile range.
ImageField percentile_clip(const ImageField& image, double lo_pct, double hi_pct);

/// Otsu threshold over a 256-bin histogram spanning [min, max]; exact ties
/// are averaged. Returns a value in input units.
double otsu_threshold(const ImageField& image);

ImageField threshold_mask(const ImageField& image, double threshold);

/// 2|A∩B| / (|A|+|B|); two empty masks count as 1. Masks are fields with
/// entries > 0.5 treated as set.
double dice(const ImageField& mask_a, const ImageField& mask_b);

/// Microscopy evaluation: independent percentile clip + Otsu segmentation of
/// both fields, then Dice of the masks.
double microscopy_dice(const ImageField& estimate, const ImageField& truth,
                       double lo_pct = 1.0, double hi_pct = 99.0);

}  // namespace wdip::metrics
