/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <vector>

#include "wdip/image.hpp"

namespace wdip::kernel_init {

/// Where the power spectral density of an image concentrates: Q is the
/// half-width of the DC-centered square that first captures fraction `t` of
/// the total power (DC bin excluded from both sums).
struct PSDEstimate {
    int q = 0;
    double t = 0.0;
    double total_power = 0.0;
};

/// Dataset-averaged, size-normalized Gaussian width for kernel init.
struct KernelInitSpec {
    double sigma_k = 0.0;                  // mean of sigma(G_i) / n_i
    std::vector<double> per_image_sigmas;  // sigma(G_i) / n_i per image
};

constexpr double kDefaultMassFraction = 0.9;

PSDEstimate psd_radius(const ImageField& image, double t);

/// Inverse transform of a DC-centered Gaussian magnitude surface with std q
/// (frequency bins); nonnegative, unit-sum, peak at the image center.
ImageField spatial_gaussian_from_radius(int q, int height, int width);

/// Spatial std of the center n×n crop of a nonnegative field, measured as
/// sqrt of the mean of the two second central moments of the renormalized
/// crop.
double cropped_sigma(const ImageField& field, int crop_n);

KernelInitSpec dataset_sigma(const std::vector<ImageField>& images,
                             const std::vector<int>& kernel_sizes,
                             double t = kDefaultMassFraction);

/// Isotropic Gaussian kernel with std = sigma_k * n pixels (clamped to
/// 0.5 px when that would be numerically a delta), unit sum.
Kernel init_kernel(const KernelInitSpec& spec, int kernel_size);

}  // namespace wdip::kernel_init
